#include "lipgm/gaussian_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "lipgm/errors.hpp"

namespace lipgm {

GaussianModel::GaussianModel(SymMatrix omega, double alpha, double beta, const NumericConfig& cfg)
    : omega_(std::move(omega)), alpha_(alpha), beta_(beta), chol_(omega_), sigma_(chol_.inverse()),
      log_det_(chol_.log_det()) {
  require(alpha_ > 0.0 && std::isfinite(alpha_), ErrorCode::InvalidArgument, "GaussianModel: alpha must be > 0");
  require(beta_ >= alpha_ && std::isfinite(beta_), ErrorCode::InvalidArgument,
          "GaussianModel: beta must be >= alpha");
  const EigenExtremes e = extreme_eigs(omega_, cfg);
  const double slack = cfg.bound_check_slack;
  if (alpha_ > e.min + slack * std::max(1.0, std::abs(e.min)))
    fail(ErrorCode::DeclaredBoundViolated,
         "GaussianModel: alpha=" + std::to_string(alpha_) + " exceeds lambda_min=" + std::to_string(e.min));
  if (e.max > beta_ + slack * std::max(1.0, std::abs(beta_)))
    fail(ErrorCode::DeclaredBoundViolated,
         "GaussianModel: lambda_max=" + std::to_string(e.max) + " exceeds beta=" + std::to_string(beta_));
}

GaussianModel GaussianModel::with_tight_bounds(SymMatrix omega, const NumericConfig& cfg) {
  const EigenExtremes e = extreme_eigs(omega, cfg);
  require(e.min > 0.0, ErrorCode::NotPositiveDefinite, "GaussianModel: precision is not positive definite");
  return GaussianModel(std::move(omega), e.min, e.max, cfg);
}

double ggm_log_density(const GaussianModel& m, std::span<const double> x) {
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "ggm_log_density: dimension mismatch");
  const double n = static_cast<double>(m.dim());
  return 0.5 * (m.log_det() - n * std::log(2.0 * std::numbers::pi) - m.omega().quad_form(x));
}

SymMatrix ggm_grad(const GaussianModel& m, std::span<const double> x) {
  require(x.size() == m.dim(), ErrorCode::DimensionMismatch, "ggm_grad: dimension mismatch");
  SymMatrix g = m.covariance() - outer(x);
  g *= 0.5;
  return g;
}

double ggm_lipschitz_k(double alpha, std::span<const double> x) {
  const double r = norm2(x);
  return 0.5 * r * r + 0.5 / alpha;
}

double ggm_lipschitz_k(const GaussianModel& m, std::span<const double> x) { return ggm_lipschitz_k(m.alpha(), x); }

}  // namespace lipgm
