#pragma once

// Seeded random instances of every model kind that has a gradient, shared by
// the unit tests and the acceptance checks.

#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "lipgm/bayes_net.hpp"
#include "lipgm/crf.hpp"
#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/lipschitz.hpp"
#include "lipgm/numerics.hpp"
#include "lipgm/rng.hpp"
#include "test_support.hpp"

namespace lipgm::testing {

using Objective = std::function<double(std::span<const double>)>;

/// One log-likelihood as a function of its parameters at a fixed point.
struct GradCase {
  Vec theta;
  Objective f;
  Vec grad;        // analytic gradient at theta
  double k = 0.0;  // gradient bound K(x) at theta
  Norm norm = Norm::LInf;
  // Norm of a gradient-shaped vector in the bound's norm. Defaults to the
  // vector norm; the Gaussian case uses the spectral norm of the matrix.
  std::function<double(std::span<const double>)> grad_norm;
};

/// Two parameter points for the same observation.
struct TwoPointCase {
  double lhs = 0.0;          // |f(theta1) - f(theta2)|
  double k_segment = 0.0;    // max K(x) over 17 points of the segment
  double dist_stated = 0.0;  // distance in the bound's own norm
  double dist_dual = 0.0;    // distance in the dual norm
};

struct InstanceFamily {
  std::string name;
  std::function<GradCase(Rng&)> grad_case;
  std::function<TwoPointCase(Rng&)> two_point;
};

namespace detail {

inline double vec_norm_in(std::span<const double> v, Norm p) { return norm(v, p); }

inline SymMatrix sym_from_upper(std::span<const double> theta, std::size_t n) {
  SymMatrix s(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) s.set(i, j, theta[k++]);
  return s;
}

// Evaluates a two-point case for a model whose parameters are a plain vector.
template <class MakeF, class MakeK>
TwoPointCase two_point_vector(const Vec& t1, const Vec& t2, Norm p, MakeF f, MakeK k) {
  TwoPointCase c;
  c.lhs = std::abs(f(t1) - f(t2));
  for (int s = 0; s <= 16; ++s) {
    const double a = s / 16.0;
    Vec t(t1.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = (1.0 - a) * t1[i] + a * t2[i];
    c.k_segment = std::max(c.k_segment, k(t));
  }
  const Vec d = subtract(t1, t2);
  c.dist_stated = norm(d, p);
  c.dist_dual = norm(d, dual(p));
  return c;
}

inline std::vector<std::size_t> random_cards(Rng& rng, std::size_t n, std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> c(n);
  for (auto& v : c) v = lo + rng.index(hi - lo + 1);
  return c;
}

}  // namespace detail

// ---------------------------------------------------------------- softmax

struct SoftmaxSetup {
  SoftmaxTable table;
  std::size_t value;
  std::size_t config;
};

inline SoftmaxSetup random_softmax(Rng& rng) {
  const std::size_t card = 2 + rng.index(3);
  const auto parents = detail::random_cards(rng, rng.index(3), 2, 3);
  std::size_t configs = 1;
  for (auto c : parents) configs *= c;
  std::vector<Vec> w(configs);
  for (auto& v : w) v = random_vec(rng, card - 1, -2.0, 2.0);
  SoftmaxTable t(card, parents, w);
  const std::size_t value = rng.index(card);
  const std::size_t config = rng.index(configs);
  return {std::move(t), value, config};
}

inline GradCase softmax_case(Rng& rng) {
  SoftmaxSetup s = random_softmax(rng);
  GradCase c;
  c.theta = s.table.parameters();
  c.f = [s](std::span<const double> th) { return s.table.with_parameters(th).log_prob(s.value, s.config); };
  c.grad = s.table.grad(s.value, s.config);
  const LipschitzConstant k = lipschitz_k(s.table);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase softmax_two_point(Rng& rng) {
  SoftmaxSetup s = random_softmax(rng);
  const Vec t1 = s.table.parameters();
  const Vec t2 = random_vec(rng, t1.size(), -2.0, 2.0);
  return detail::two_point_vector(
      t1, t2, Norm::LInf, [&](const Vec& th) { return s.table.with_parameters(th).log_prob(s.value, s.config); },
      [&](const Vec& th) { return lipschitz_k(s.table.with_parameters(th)).value; });
}

// --------------------------------------------------------------- logistic

struct LogisticSetup {
  LogisticCpd cpd;
  std::size_t value;
  Vec parents;
};

inline LogisticSetup random_logistic(Rng& rng) {
  const std::size_t card = 2 + rng.index(3);
  const std::size_t d = 1 + rng.index(3);
  std::vector<Vec> w(card - 1);
  for (auto& v : w) v = random_vec(rng, d, -2.0, 2.0);
  LogisticCpd cpd(card, FeatureMap::linear(d), w);
  const std::size_t value = rng.index(card);
  Vec parents = random_vec(rng, d);
  return {std::move(cpd), value, std::move(parents)};
}

inline GradCase logistic_case(Rng& rng) {
  LogisticSetup s = random_logistic(rng);
  GradCase c;
  c.theta = s.cpd.parameters();
  c.f = [s](std::span<const double> th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); };
  c.grad = s.cpd.grad(s.value, s.parents);
  const LipschitzConstant k = lipschitz_k(s.cpd);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase logistic_two_point(Rng& rng) {
  LogisticSetup s = random_logistic(rng);
  const Vec t1 = s.cpd.parameters();
  const Vec t2 = random_vec(rng, t1.size(), -2.0, 2.0);
  return detail::two_point_vector(
      t1, t2, Norm::LInf, [&](const Vec& th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); },
      [&](const Vec&) { return lipschitz_k(s.cpd).value; });
}

// -------------------------------------------------------- linear Gaussian

struct LinearGaussianSetup {
  LinearGaussianCpd cpd;
  double value;
  Vec parents;
};

inline LinearGaussianSetup random_linear_gaussian(Rng& rng, double beta = 3.0) {
  const std::size_t d = 1 + rng.index(4);
  Vec w = random_vec(rng, d);
  const double n2 = norm2(w);
  if (n2 > 0.9 * beta)
    for (double& v : w) v *= 0.9 * beta / n2;
  Vec parents = random_vec(rng, d, -2.0, 2.0);
  const double value = 2.0 * rng.normal();
  return {LinearGaussianCpd(FeatureMap::linear(d), std::move(w), beta), value, std::move(parents)};
}

inline GradCase linear_gaussian_case(Rng& rng) {
  LinearGaussianSetup s = random_linear_gaussian(rng);
  GradCase c;
  c.theta = s.cpd.parameters();
  c.f = [s](std::span<const double> th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); };
  c.grad = s.cpd.grad(s.value, s.parents);
  const LipschitzConstant k = lipschitz_k(s.cpd, s.value, s.parents);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase linear_gaussian_two_point(Rng& rng) {
  const double beta = 3.0;
  LinearGaussianSetup s = random_linear_gaussian(rng, beta);
  const Vec t1 = s.cpd.parameters();
  Vec t2 = random_vec(rng, t1.size());
  const double n2 = norm2(t2);
  if (n2 > 0.9 * beta)
    for (double& v : t2) v *= 0.9 * beta / n2;
  return detail::two_point_vector(
      t1, t2, Norm::L2, [&](const Vec& th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); },
      [&](const Vec& th) { return lipschitz_k(s.cpd.with_parameters(th), s.value, s.parents).value; });
}

// ----------------------------------------------------------------- Laplace

struct LaplaceSetup {
  LaplaceCpd cpd;
  double value;
  Vec parents;
};

inline LaplaceSetup random_laplace(Rng& rng) {
  for (;;) {
    const std::size_t d = 1 + rng.index(4);
    Vec w = random_vec(rng, d);
    Vec parents = random_vec(rng, d, -2.0, 2.0);
    const double value = 2.0 * rng.normal();
    const double residual = value - dot(w, parents);
    if (std::abs(residual) > 1e-3) return {LaplaceCpd(FeatureMap::linear(d), std::move(w)), value, std::move(parents)};
  }
}

inline GradCase laplace_case(Rng& rng) {
  LaplaceSetup s = random_laplace(rng);
  GradCase c;
  c.theta = s.cpd.parameters();
  c.f = [s](std::span<const double> th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); };
  c.grad = s.cpd.grad(s.value, s.parents);
  const LipschitzConstant k = lipschitz_k(s.cpd, s.parents);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase laplace_two_point(Rng& rng) {
  LaplaceSetup s = random_laplace(rng);
  const Vec t1 = s.cpd.parameters();
  const Vec t2 = random_vec(rng, t1.size());
  return detail::two_point_vector(
      t1, t2, Norm::L2, [&](const Vec& th) { return s.cpd.with_parameters(th).log_prob(s.value, s.parents); },
      [&](const Vec&) { return lipschitz_k(s.cpd, s.parents).value; });
}

// ---------------------------------------------------- discrete factor graph

struct DfgSetup {
  DiscreteFactorGraph model;
  Vec x;
};

inline DfgSetup random_dfg(Rng& rng) {
  const std::size_t n = 2 + rng.index(5);
  const bool field = rng.bernoulli(0.5);
  FeatureMap psi = field ? FeatureMap::pairwise_with_field(n) : FeatureMap::pairwise(n);
  Vec w = random_vec(rng, psi.output_dim());
  DiscreteFactorGraph m(StateSpace::ising(n), psi, std::move(w));
  Vec x = m.space().decode(rng.index(m.num_states()));
  return {std::move(m), std::move(x)};
}

inline GradCase dfg_case(Rng& rng) {
  DfgSetup s = random_dfg(rng);
  GradCase c;
  c.theta = s.model.weights();
  c.f = [s](std::span<const double> th) {
    return dfg_log_likelihood(s.model.with_weights(Vec(th.begin(), th.end())), s.x);
  };
  c.grad = dfg_grad(s.model, s.x);
  const LipschitzConstant k = lipschitz_k(s.model, s.x);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase dfg_two_point(Rng& rng) {
  DfgSetup s = random_dfg(rng);
  const Vec t1 = s.model.weights();
  const Vec t2 = random_vec(rng, t1.size());
  return detail::two_point_vector(
      t1, t2, Norm::LInf, [&](const Vec& th) { return dfg_log_likelihood(s.model.with_weights(th), s.x); },
      [&](const Vec&) { return lipschitz_k(s.model, s.x).value; });
}

// -------------------------------------------------- continuous factor graph

struct CfgSetup {
  ContinuousFactorGraph model;
  Vec x;
};

inline CfgSetup random_cfg(Rng& rng, Norm p) {
  const std::size_t n = 1 + rng.index(4);
  const SymMatrix omega = random_pd(rng, n, 0.5);
  const double alpha = 1.01 * quadratic_feature_norm_bound(inverse_pd(omega));
  Vec x(n);
  for (double& v : x) v = rng.normal();
  return {ContinuousFactorGraph::from_precision(omega, alpha, p), std::move(x)};
}

inline Norm random_norm(Rng& rng) {
  const Norm all[] = {Norm::L1, Norm::L2, Norm::LInf};
  return all[rng.index(3)];
}

inline GradCase cfg_case(Rng& rng) {
  CfgSetup s = random_cfg(rng, random_norm(rng));
  GradCase c;
  c.theta = s.model.weights();
  c.f = [s](std::span<const double> th) {
    return cfg_log_density(s.model.with_weights(Vec(th.begin(), th.end())), s.x);
  };
  c.grad = cfg_grad(s.model, s.x);
  const LipschitzConstant k = lipschitz_k(s.model, s.x);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

inline TwoPointCase cfg_two_point(Rng& rng) {
  const Norm p = random_norm(rng);
  CfgSetup s = random_cfg(rng, p);
  const std::size_t n = s.model.dim();
  Rng local(rng.next());
  const SymMatrix omega2 = random_pd(local, n, 0.5);
  const double alpha2 = 1.01 * quadratic_feature_norm_bound(inverse_pd(omega2));
  const ContinuousFactorGraph m2 = ContinuousFactorGraph::from_precision(omega2, alpha2, p);
  const double alpha = std::max(s.model.alpha_feat(), alpha2);
  const Vec t1 = s.model.weights();
  const Vec t2 = m2.weights();
  // Intermediate weights are valid models: the implied precision is linear in w.
  auto model_at = [&](const Vec& th) { return ContinuousFactorGraph(s.model.psi(), th, 1e300, p); };
  auto k_at = [&](const Vec& th) {
    const ContinuousFactorGraph m = model_at(th);
    return norm(m.psi()(s.x), p) + std::max(alpha, norm(m.feature_mean(), p));
  };
  return detail::two_point_vector(
      t1, t2, p, [&](const Vec& th) { return cfg_log_density(model_at(th), s.x); }, k_at);
}

// ---------------------------------------------------------------- Gaussian

struct GgmSetup {
  std::size_t n;
  SymMatrix omega;
  Vec x;
};

inline GgmSetup random_ggm_setup(Rng& rng) {
  const std::size_t n = 1 + rng.index(5);
  SymMatrix omega = random_pd(rng, n, 0.5);
  Vec x(n);
  for (double& v : x) v = 1.5 * rng.normal();
  return {n, std::move(omega), std::move(x)};
}

inline GradCase ggm_case(Rng& rng) {
  GgmSetup s = random_ggm_setup(rng);
  const GaussianModel m = GaussianModel::with_tight_bounds(s.omega);
  GradCase c;
  c.theta = s.omega.upper_with_diag();
  c.f = [s](std::span<const double> th) {
    return ggm_log_density(GaussianModel::with_tight_bounds(detail::sym_from_upper(th, s.n)), s.x);
  };
  // Off-diagonal parameters move both Omega_ij and Omega_ji.
  const SymMatrix g = ggm_grad(m, s.x);
  for (std::size_t i = 0; i < s.n; ++i)
    for (std::size_t j = i; j < s.n; ++j) c.grad.push_back(i == j ? g(i, i) : 2.0 * g(i, j));
  const LipschitzConstant k = lipschitz_k(m, s.x);
  c.k = k.value;
  c.norm = k.norm;
  // Back to the matrix gradient, whose spectral norm the bound controls.
  c.grad_norm = [n = s.n](std::span<const double> v) {
    SymMatrix gm(n);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i; j < n; ++j, ++idx) gm.set(i, j, i == j ? v[idx] : 0.5 * v[idx]);
    return spectral_norm(gm);
  };
  return c;
}

inline TwoPointCase ggm_two_point(Rng& rng) {
  GgmSetup s = random_ggm_setup(rng);
  Rng local(rng.next());
  const SymMatrix omega2 = random_pd(local, s.n, 0.5);
  TwoPointCase c;
  c.lhs = std::abs(ggm_log_density(GaussianModel::with_tight_bounds(s.omega), s.x) -
                   ggm_log_density(GaussianModel::with_tight_bounds(omega2), s.x));
  for (int t = 0; t <= 16; ++t) {
    const double a = t / 16.0;
    const SymMatrix om = (1.0 - a) * s.omega + a * omega2;
    c.k_segment = std::max(c.k_segment, ggm_lipschitz_k(extreme_eigs(om).min, s.x));
  }
  const SymMatrix d = s.omega - omega2;
  c.dist_stated = spectral_norm(d);
  c.dist_dual = nuclear_norm(d);
  return c;
}

// ---------------------------------------------------------------------- CRF

struct CrfSetup {
  CrfModel model;
  Vec y;
  Vec x;
};

inline CrfSetup random_crf(Rng& rng) {
  const std::size_t ny = 1 + rng.index(3);
  const std::size_t nx = 1 + rng.index(3);
  const FeatureMap psi = FeatureMap::pairwise_with_field(ny + nx).with_bound({1.0, Norm::LInf});
  Vec w = random_vec(rng, psi.output_dim());
  CrfModel m(StateSpace::ising(ny), nx, psi, std::move(w));
  Vec y = m.y_space().decode(rng.index(m.y_space().size()));
  Vec x = random_vec(rng, nx);
  return {std::move(m), std::move(y), std::move(x)};
}

inline GradCase crf_case(Rng& rng) {
  CrfSetup s = random_crf(rng);
  GradCase c;
  c.theta = s.model.weights();
  c.f = [s](std::span<const double> th) {
    return crf_log_conditional(s.model.with_weights(Vec(th.begin(), th.end())), s.y, s.x);
  };
  c.grad = crf_grad(s.model, s.y, s.x);
  const LipschitzConstant k = lipschitz_k(s.model, s.y, s.x);
  c.k = k.value;
  c.norm = k.norm;
  return c;
}

// ------------------------------------------------------------------ catalog

/// The eight gradient operations.
inline std::vector<InstanceFamily> gradient_families() {
  return {
      {"softmax_table", softmax_case, softmax_two_point},
      {"logistic_cpd", logistic_case, logistic_two_point},
      {"linear_gaussian_cpd", linear_gaussian_case, linear_gaussian_two_point},
      {"laplace_cpd", laplace_case, laplace_two_point},
      {"discrete_factor_graph", dfg_case, dfg_two_point},
      {"continuous_factor_graph", cfg_case, cfg_two_point},
      {"gaussian_graphical_model", ggm_case, ggm_two_point},
      {"crf", crf_case, nullptr},
  };
}

inline double grad_norm_of(const GradCase& c, std::span<const double> g) {
  return c.grad_norm ? c.grad_norm(g) : norm(g, c.norm);
}

}  // namespace lipgm::testing
