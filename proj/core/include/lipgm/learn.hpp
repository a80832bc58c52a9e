#pragma once

#include <cstdint>
#include <vector>

#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

struct FitConfig {
  double lambda = 0.1;
  int max_iter = 10000;
  double tol = 1e-6;
  std::uint64_t seed = 0;
};

/// Column-centered (1/n) X^T X. Throws TooFewSamples below 2 rows.
SymMatrix empirical_covariance(const Matrix& data);

struct TikhonovFit {
  SymMatrix sigma_hat;  // S + lambda I
  GaussianModel model;  // precision sigma_hat^{-1}, alpha = 1/(lambda_max(S)+lambda), beta = 1/lambda
};

TikhonovFit tikhonov(const SymMatrix& s, double lambda, const NumericConfig& cfg = default_numeric_config());

struct GlassoFit {
  GaussianModel model;
  bool converged = false;  // false: iteration cap reached, model is the last (best) iterate
  int iterations = 0;
  double kkt_residual = 0.0;
  std::vector<double> objective;  // per accepted iterate, non-decreasing
};

/// log det Omega - <S, Omega> - lambda sum_{i != j} |Omega_ij|.
double glasso_objective(const SymMatrix& s, const SymMatrix& omega, double lambda);
/// Max violation of the optimality conditions: |(Omega^{-1} - S)_ii| on the
/// diagonal, and off the diagonal |G_ij - lambda sign(Omega_ij)| or
/// max(|G_ij| - lambda, 0) at zeros, with G = Omega^{-1} - S.
double glasso_kkt_residual(const SymMatrix& s, const SymMatrix& omega, double lambda);

/// Maximizes glasso_objective by proximal gradient with Barzilai-Borwein steps
/// and backtracking; steps that leave the positive definite cone or fail the
/// sufficient-decrease test are shrunk. The diagonal is not penalized.
GlassoFit graphical_lasso(const SymMatrix& s, const FitConfig& cfg);

struct IsingFit {
  DiscreteFactorGraph model;
  bool converged = false;
  int iterations = 0;
  double optimality = 0.0;  // l_inf norm of the minimum-norm subgradient
  std::vector<double> objective;  // per accepted iterate, non-increasing
};

/// (1/n) sum_rows sum_i log(1 + exp(-2 x_i sum_j J_ij x_j)) + lambda ||theta||_1,
/// with theta the couplings J_ij, i < j (each pair once).
double pseudolikelihood_objective(const Matrix& data, std::span<const double> theta, double lambda);
Vec pseudolikelihood_grad(const Matrix& data, std::span<const double> theta);

/// l1-penalized pseudolikelihood over a shared symmetric coupling matrix
/// without field, fitted by proximal gradient. Data entries must be -1/+1.
IsingFit ising_pseudolikelihood(const Matrix& data, const FitConfig& cfg);

/// Mean per-row log-likelihood.
double gaussian_test_ll(const GaussianModel& m, const Matrix& data);
double ising_test_ll(const DiscreteFactorGraph& m, const Matrix& data);

}  // namespace lipgm
