#pragma once

#include <cstddef>
#include <span>

#include "lipgm/config.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

/// Zero-mean Gaussian graphical model parameterized by its precision matrix,
/// with declared spectral bounds alpha I <= Omega <= beta I.
class GaussianModel {
 public:
  /// Validates Omega > 0 and the declared bounds against the computed extremes.
  GaussianModel(SymMatrix omega, double alpha, double beta, const NumericConfig& cfg = default_numeric_config());

  /// Declares alpha and beta as the computed extreme eigenvalues of omega.
  static GaussianModel with_tight_bounds(SymMatrix omega, const NumericConfig& cfg = default_numeric_config());

  std::size_t dim() const noexcept { return omega_.dim(); }
  const SymMatrix& omega() const noexcept { return omega_; }
  const SymMatrix& covariance() const noexcept { return sigma_; }
  const Cholesky& factor() const noexcept { return chol_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  double log_det() const noexcept { return log_det_; }

 private:
  SymMatrix omega_;
  double alpha_;
  double beta_;
  Cholesky chol_;
  SymMatrix sigma_;
  double log_det_;
};

/// log p(x | Omega) = (log det Omega - N log 2 pi - x^T Omega x) / 2.
double ggm_log_density(const GaussianModel& m, std::span<const double> x);

/// d log p / d Omega = (Omega^{-1} - x x^T) / 2, treating entries as free.
SymMatrix ggm_grad(const GaussianModel& m, std::span<const double> x);

/// ||x||^2 / 2 + 1 / (2 alpha), the spectral-norm gradient bound.
double ggm_lipschitz_k(const GaussianModel& m, std::span<const double> x);

/// Same bound for an explicit alpha (shared across a parameter segment).
double ggm_lipschitz_k(double alpha, std::span<const double> x);

}  // namespace lipgm
