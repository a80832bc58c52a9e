#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lipgm/config.hpp"
#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

// Norm conventions. A gradient bound ||grad f||_q <= K gives
// |f(a) - f(b)| <= K ||a - b||_p only when p is the dual of q. The constants
// reported by lipschitz_k() are gradient bounds; the functions below that
// take a distance norm convert them so every returned bound is valid.

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// ------------------------------------------------------------- Gaussian

/// 1/2 (log det Omega1 / det Omega2 + <Omega1^{-1}, Omega2> - N).
double kl_gaussian(const GaussianModel& m1, const GaussianModel& m2);
/// (1/alpha) ||Omega1 - Omega2||_2 with alpha = min(alpha1, alpha2).
double kl_gaussian_bound(const GaussianModel& m1, const GaussianModel& m2,
                         const NumericConfig& cfg = default_numeric_config());
/// Sample mean of log p1 - log p2 under P1.
McEstimate kl_gaussian_mc(const GaussianModel& m1, const GaussianModel& m2, std::size_t n_samples,
                          std::uint64_t seed);

/// E_{P1}[||x||^2/2 + 1/(2 alpha)] = tr(Sigma1)/2 + 1/(2 alpha).
double gaussian_kbar(const GaussianModel& m1, double alpha);
/// The same expectation by sampling.
McEstimate gaussian_kbar_mc(const GaussianModel& m1, double alpha, std::size_t n_samples, std::uint64_t seed);
/// 2 N beta^{N/2} / alpha^{N/2+1}.
double loose_gaussian_kbar(double alpha, double beta, std::size_t n);

/// Differential entropy 1/2 (N log 2 pi e - log det Omega).
double gaussian_entropy(const GaussianModel& m);
/// E_{N(0, Sigma*)}[log p(x | Omega)].
double expected_ll_gaussian(const SymMatrix& sigma_star, const GaussianModel& m);

/// 1/2 int min(p1, p2), estimated with half the samples from each model.
McEstimate bayes_error_gaussian_mc(const GaussianModel& m1, const GaussianModel& m2, std::size_t n_samples,
                                   std::uint64_t seed);

// ------------------------------------------------------------- discrete

/// Exact KL by enumeration. Throws StructureMismatch unless both models share
/// state space and feature map.
double kl_discrete_exact(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2);
double discrete_entropy(const DiscreteFactorGraph& m);
double expected_ll_discrete(const DiscreteFactorGraph& m_star, const DiscreteFactorGraph& m);
/// 1/2 sum_x min(p1(x), p2(x)).
double bayes_error_discrete(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2);
/// E_{P1}[K(x)] by enumeration with the l_inf gradient bound (always 2).
double discrete_kbar(const DiscreteFactorGraph& m1);
/// Constant K with |f(w1) - f(w2)| <= K ||w1 - w2||_p, from ||grad||_inf <= 2:
/// 2 F^{1/q} where q is the dual of p.
double dfg_lipschitz_for_distance(const DiscreteFactorGraph& m, Norm p);

// -------------------------------------------------------------- generic

/// ||theta1 - theta2||_p. Throws StructureMismatch on a length mismatch.
double param_distance(std::span<const double> theta1, std::span<const double> theta2, Norm p);
/// kbar * ||theta1 - theta2||_p.
double kl_bound_generic(double kbar, std::span<const double> theta1, std::span<const double> theta2, Norm p);

struct BayesErrorBounds {
  double distance = 0.0;
  double bb = 0.0;             // sum_c E_c[exp(-K(x) distance)]
  double bb_over_4 = 0.0;      // lower bound on the Bayes error
  double k_tilde = 0.0;        // min_c E_c[K(x)]
  double neg_log_upper = 0.0;  // log 4 + k_tilde * distance
};

/// Both expectations by enumeration with the constant K; when k is not
/// given, dfg_lipschitz_for_distance(m1, p) is used.
BayesErrorBounds bayes_error_bounds(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2, Norm p,
                                    std::optional<double> k = std::nullopt);
/// Closed forms for K(x) = ||x||^2/2 + 1/(2 alpha), alpha = min(alpha1, alpha2),
/// at the given precision-matrix distance:
/// E_c[exp(-K distance)] = exp(-distance/(2 alpha)) det(I + distance Sigma_c)^{-1/2}.
BayesErrorBounds bayes_error_bounds(const GaussianModel& m1, const GaussianModel& m2, double distance);

// ---------------------------------------------------- continuous factor graph

/// KL between the implied Gaussians.
double kl_cfg_exact(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2);
/// An alpha that bounds E_{P1}||psi||_p and ||E_{P_t} psi||_p for every model
/// on the segment between the two weight vectors.
double cfg_segment_alpha(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2);
/// 2 alpha ||w1 - w2||_q with alpha = cfg_segment_alpha and q the dual of the
/// model's p-norm.
double kl_cfg_bound(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2);

}  // namespace lipgm
