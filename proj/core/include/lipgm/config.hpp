#pragma once

#include <cstddef>
#include <cstdint>

namespace lipgm {

/// Numerical tolerances and iteration budgets shared by the kernels.
struct NumericConfig {
  double eig_tol = 1e-10;
  int eig_max_iter = 10000;
  int jacobi_max_sweeps = 100;
  double jacobi_tol = 1e-14;
  // Relative eigenvalue threshold below which PCA treats a direction as null.
  double rank_tol = 1e-10;
  int kmeans_max_iter = 300;
  // Relative slack when checking declared spectral bounds against computed extremes.
  double bound_check_slack = 1e-8;
};

inline const NumericConfig& default_numeric_config() {
  static const NumericConfig cfg{};
  return cfg;
}

inline constexpr std::size_t kDefaultEnumerationCap = std::size_t{1} << 20;

/// Joint-state cap for exhaustive enumeration. LIPGM_ENUM_CAP overrides the default.
std::size_t enumeration_cap();

/// Slack added to every bound inequality check.
inline constexpr double kBoundSlack = 1e-9;

}  // namespace lipgm
