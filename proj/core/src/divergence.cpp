#include "lipgm/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lipgm/errors.hpp"
#include "lipgm/rng.hpp"

namespace lipgm {

namespace {

void require_same_dim(const GaussianModel& a, const GaussianModel& b, const char* what) {
  require(a.dim() == b.dim(), ErrorCode::DimensionMismatch,
          std::string(what) + ": dimensions " + std::to_string(a.dim()) + " and " + std::to_string(b.dim()));
}

void require_same_structure(const DiscreteFactorGraph& a, const DiscreteFactorGraph& b, const char* what) {
  require(same_structure(a, b), ErrorCode::StructureMismatch,
          std::string(what) + ": models differ in state space or feature map");
}

Vec draw(const GaussianModel& m, Rng& rng) {
  Vec z(m.dim());
  for (double& v : z) v = rng.normal();
  return m.factor().solve_upper(z);
}

McEstimate summarize(double sum, double sum_sq, std::size_t n) {
  const double nn = static_cast<double>(n);
  const double mean = sum / nn;
  const double var = std::max(0.0, (sum_sq - nn * mean * mean) / (nn - 1.0));
  return {mean, std::sqrt(var / nn), n};
}

}  // namespace

// ------------------------------------------------------------- Gaussian

double kl_gaussian(const GaussianModel& m1, const GaussianModel& m2) {
  require_same_dim(m1, m2, "kl_gaussian");
  const double n = static_cast<double>(m1.dim());
  const double kl = 0.5 * (m1.log_det() - m2.log_det() + inner(m1.covariance(), m2.omega()) - n);
  return std::max(kl, 0.0);
}

double kl_gaussian_bound(const GaussianModel& m1, const GaussianModel& m2, const NumericConfig& cfg) {
  require_same_dim(m1, m2, "kl_gaussian_bound");
  const double alpha = std::min(m1.alpha(), m2.alpha());
  return spectral_norm(m1.omega() - m2.omega(), cfg) / alpha;
}

McEstimate kl_gaussian_mc(const GaussianModel& m1, const GaussianModel& m2, std::size_t n_samples,
                          std::uint64_t seed) {
  require_same_dim(m1, m2, "kl_gaussian_mc");
  require(n_samples >= 100, ErrorCode::InvalidArgument, "kl_gaussian_mc: need at least 100 samples");
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const Vec x = draw(m1, rng);
    const double d = ggm_log_density(m1, x) - ggm_log_density(m2, x);
    sum += d;
    sum_sq += d * d;
  }
  return summarize(sum, sum_sq, n_samples);
}

double gaussian_kbar(const GaussianModel& m1, double alpha) {
  require(alpha > 0.0, ErrorCode::InvalidArgument, "gaussian_kbar: alpha must be > 0");
  return 0.5 * m1.covariance().trace() + 0.5 / alpha;
}

McEstimate gaussian_kbar_mc(const GaussianModel& m1, double alpha, std::size_t n_samples, std::uint64_t seed) {
  require(n_samples >= 2, ErrorCode::InvalidArgument, "gaussian_kbar_mc: need at least 2 samples");
  Rng rng(seed);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::size_t s = 0; s < n_samples; ++s) {
    const double k = ggm_lipschitz_k(alpha, draw(m1, rng));
    sum += k;
    sum_sq += k * k;
  }
  return summarize(sum, sum_sq, n_samples);
}

double loose_gaussian_kbar(double alpha, double beta, std::size_t n) {
  require(alpha > 0.0 && beta >= alpha, ErrorCode::InvalidArgument, "loose_gaussian_kbar: need 0 < alpha <= beta");
  const double half = 0.5 * static_cast<double>(n);
  return 2.0 * static_cast<double>(n) * std::exp(half * std::log(beta) - (half + 1.0) * std::log(alpha));
}

double gaussian_entropy(const GaussianModel& m) {
  const double n = static_cast<double>(m.dim());
  return 0.5 * (n * std::log(2.0 * std::numbers::pi * std::numbers::e) - m.log_det());
}

double expected_ll_gaussian(const SymMatrix& sigma_star, const GaussianModel& m) {
  require(sigma_star.dim() == m.dim(), ErrorCode::DimensionMismatch, "expected_ll_gaussian: dimension mismatch");
  const double n = static_cast<double>(m.dim());
  return -0.5 * (n * std::log(2.0 * std::numbers::pi) - m.log_det() + inner(sigma_star, m.omega()));
}

McEstimate bayes_error_gaussian_mc(const GaussianModel& m1, const GaussianModel& m2, std::size_t n_samples,
                                   std::uint64_t seed) {
  require_same_dim(m1, m2, "bayes_error_gaussian_mc");
  require(n_samples >= 100, ErrorCode::InvalidArgument, "bayes_error_gaussian_mc: need at least 100 samples");
  // With q = (p1 + p2)/2, BE = E_q[min(p1, p2) / (p1 + p2)] = E_q[1 / (1 + e^{|log p1 - log p2|})],
  // sampled in two equal strata.
  Rng rng(seed);
  const std::size_t half = n_samples / 2;
  double mean[2] = {0.0, 0.0};
  double var[2] = {0.0, 0.0};
  for (int c = 0; c < 2; ++c) {
    const GaussianModel& src = c == 0 ? m1 : m2;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t s = 0; s < half; ++s) {
      const Vec x = draw(src, rng);
      const double gap = std::abs(ggm_log_density(m1, x) - ggm_log_density(m2, x));
      const double h = 1.0 / (1.0 + std::exp(gap));
      sum += h;
      sum_sq += h * h;
    }
    const McEstimate e = summarize(sum, sum_sq, half);
    mean[c] = e.estimate;
    var[c] = e.std_error * e.std_error;
  }
  return {0.5 * (mean[0] + mean[1]), 0.5 * std::sqrt(var[0] + var[1]), 2 * half};
}

BayesErrorBounds bayes_error_bounds(const GaussianModel& m1, const GaussianModel& m2, double distance) {
  require_same_dim(m1, m2, "bayes_error_bounds");
  require(distance >= 0.0, ErrorCode::InvalidArgument, "bayes_error_bounds: negative distance");
  const double alpha = std::min(m1.alpha(), m2.alpha());
  BayesErrorBounds out;
  out.distance = distance;
  out.k_tilde = std::numeric_limits<double>::infinity();
  for (const GaussianModel* m : {&m1, &m2}) {
    SymMatrix a = m->covariance() * distance;
    for (std::size_t i = 0; i < a.dim(); ++i) a.add(i, i, 1.0);
    out.bb += std::exp(-0.5 * distance / alpha - 0.5 * log_det_pd(a));
    out.k_tilde = std::min(out.k_tilde, gaussian_kbar(*m, alpha));
  }
  out.bb_over_4 = 0.25 * out.bb;
  out.neg_log_upper = std::log(4.0) + out.k_tilde * distance;
  return out;
}

// ------------------------------------------------------------- discrete

double kl_discrete_exact(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2) {
  require_same_structure(m1, m2, "kl_discrete_exact");
  double kl = 0.0;
  for (std::size_t s = 0; s < m1.num_states(); ++s) {
    const double lp = m1.log_prob(s);
    kl += std::exp(lp) * (lp - m2.log_prob(s));
  }
  return std::max(kl, 0.0);
}

double discrete_entropy(const DiscreteFactorGraph& m) {
  double h = 0.0;
  for (double lp : m.log_probs()) h -= std::exp(lp) * lp;
  return h;
}

double expected_ll_discrete(const DiscreteFactorGraph& m_star, const DiscreteFactorGraph& m) {
  require_same_structure(m_star, m, "expected_ll_discrete");
  double e = 0.0;
  for (std::size_t s = 0; s < m.num_states(); ++s) e += std::exp(m_star.log_prob(s)) * m.log_prob(s);
  return e;
}

double bayes_error_discrete(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2) {
  require_same_structure(m1, m2, "bayes_error_discrete");
  double be = 0.0;
  for (std::size_t s = 0; s < m1.num_states(); ++s) be += std::exp(std::min(m1.log_prob(s), m2.log_prob(s)));
  return 0.5 * be;
}

double discrete_kbar(const DiscreteFactorGraph& m1) {
  double k = 0.0;
  for (double lp : m1.log_probs()) k += std::exp(lp) * 2.0;
  return k;
}

double dfg_lipschitz_for_distance(const DiscreteFactorGraph& m, Norm p) {
  const double f = static_cast<double>(m.weights().size());
  switch (p) {
    case Norm::L1: return 2.0;
    case Norm::L2: return 2.0 * std::sqrt(f);
    case Norm::LInf: return 2.0 * f;
  }
  return 2.0 * f;
}

BayesErrorBounds bayes_error_bounds(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2, Norm p,
                                    std::optional<double> k) {
  require_same_structure(m1, m2, "bayes_error_bounds");
  const double kk = k.value_or(dfg_lipschitz_for_distance(m1, p));
  BayesErrorBounds out;
  out.distance = param_distance(m1.weights(), m2.weights(), p);
  out.k_tilde = std::numeric_limits<double>::infinity();
  for (const DiscreteFactorGraph* m : {&m1, &m2}) {
    double e = 0.0;
    double ek = 0.0;
    for (double lp : m->log_probs()) {
      const double pr = std::exp(lp);
      e += pr * std::exp(-kk * out.distance);
      ek += pr * kk;
    }
    out.bb += e;
    out.k_tilde = std::min(out.k_tilde, ek);
  }
  out.bb_over_4 = 0.25 * out.bb;
  out.neg_log_upper = std::log(4.0) + out.k_tilde * out.distance;
  return out;
}

// -------------------------------------------------------------- generic

double param_distance(std::span<const double> theta1, std::span<const double> theta2, Norm p) {
  require(theta1.size() == theta2.size(), ErrorCode::StructureMismatch,
          "param_distance: parameter lengths " + std::to_string(theta1.size()) + " and " +
              std::to_string(theta2.size()));
  return norm(subtract(theta1, theta2), p);
}

double kl_bound_generic(double kbar, std::span<const double> theta1, std::span<const double> theta2, Norm p) {
  require(kbar >= 0.0, ErrorCode::InvalidArgument, "kl_bound_generic: negative kbar");
  return kbar * param_distance(theta1, theta2, p);
}

// ---------------------------------------------------- continuous factor graph

namespace {

void require_same_cfg(const ContinuousFactorGraph& a, const ContinuousFactorGraph& b, const char* what) {
  require(a.psi() == b.psi() && a.p_norm() == b.p_norm(), ErrorCode::StructureMismatch,
          std::string(what) + ": models differ in feature map or norm");
}

}  // namespace

double kl_cfg_exact(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2) {
  require_same_cfg(m1, m2, "kl_cfg_exact");
  return kl_gaussian(GaussianModel::with_tight_bounds(m1.implied_precision()),
                     GaussianModel::with_tight_bounds(m2.implied_precision()));
}

double cfg_segment_alpha(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2) {
  require_same_cfg(m1, m2, "cfg_segment_alpha");
  // The inverse is matrix convex, so along the segment every variance is at
  // most the larger endpoint variance, and |Sigma_ij| <= sqrt(Sigma_ii Sigma_jj).
  const Vec d1 = inverse_pd(m1.implied_precision()).diag();
  const Vec d2 = inverse_pd(m2.implied_precision()).diag();
  const std::size_t n = d1.size();
  Vec v;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) v.push_back(std::sqrt(std::max(d1[i], d2[i]) * std::max(d1[j], d2[j])));
  return std::max({m1.alpha_feat(), m2.alpha_feat(), norm(v, m1.p_norm())});
}

double kl_cfg_bound(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2) {
  return 2.0 * cfg_segment_alpha(m1, m2) * param_distance(m1.weights(), m2.weights(), dual(m1.p_norm()));
}

}  // namespace lipgm
