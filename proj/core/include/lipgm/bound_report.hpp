#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lipgm/divergence.hpp"
#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

enum class CheckKind {
  Exact,     // both sides computed exactly; a failure is a bug
  Estimate,  // lhs is a Monte Carlo estimate; passes when lhs - 3 se <= rhs
  Stated,    // the inequality in its originally stated norm; informational
};

struct BoundCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double std_error = 0.0;  // Estimate checks only
  bool ok = false;
  CheckKind kind = CheckKind::Exact;
};

/// A pair of models compared through distances, Lipschitz constants and the
/// KL, expected log-likelihood and Bayes-error bounds.
struct BoundReport {
  std::string kind;                 // "ggm" or "dfg"
  Norm p_norm = Norm::L1;           // norm of param_distance
  double param_distance = 0.0;
  double lipschitz_kbar = 0.0;      // E_{P1}[K(x)] for that distance norm
  std::optional<double> kl_exact;
  double kl_bound = 0.0;
  std::optional<double> bayes_error_exact;
  std::optional<McEstimate> bayes_error_mc;
  double bb = 0.0;
  double bayes_error_lower = 0.0;   // BB / 4
  double k_tilde = 0.0;
  double neg_log_be_upper = 0.0;
  std::optional<double> entropy;        // H(P1), discrete only
  std::optional<double> expected_ll;    // E_{P1}[log p2]
  std::optional<double> spectral_kl_bound;  // (1/alpha)||Omega1 - Omega2||_2
  std::optional<double> loose_kbar;
  std::optional<McEstimate> kbar_mc;
  std::vector<BoundCheck> checks;

  /// True when every Exact and Estimate check holds.
  bool satisfied() const;
};

inline constexpr std::string_view kBoundCsvHeader =
    "distance,kbar,kl_exact,kl_bound,be_exact,bb_over_4,neg_log_be_upper,flags";

/// Divergence bounds for two Gaussian models. The distance is the nuclear
/// norm of Omega1 - Omega2, dual to the spectral-norm gradient bound. The
/// Bayes error has no closed form and is estimated with mc_samples draws.
BoundReport bound_report(const GaussianModel& m1, const GaussianModel& m2, std::uint64_t seed,
                         std::size_t mc_samples = 100000, const NumericConfig& cfg = default_numeric_config());

/// Bounds for two discrete factor graphs with the distance in norm p. The
/// Lipschitz constant is converted to that norm (2 for l_1).
BoundReport bound_report(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2, Norm p = Norm::L1);

/// Bounds for two quadratic continuous factor graphs, with the distance in
/// the dual of the models' p-norm and the segment alpha. The Bayes error and
/// BB are estimated with mc_samples draws.
BoundReport bound_report(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2, std::uint64_t seed,
                         std::size_t mc_samples = 100000);

std::string to_json(const BoundReport& r);
/// One CSV row matching kBoundCsvHeader; absent values are empty.
std::string to_csv_row(const BoundReport& r);

}  // namespace lipgm
