#include "lipgm/factor_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "lipgm/errors.hpp"

namespace lipgm {

DiscreteFactorGraph::DiscreteFactorGraph(StateSpace space, FeatureMap psi, Vec w, std::size_t cap)
    : space_(std::move(space)), psi_(std::move(psi)), w_(std::move(w)), cap_(cap) {
  require(psi_.input_dim() == space_.num_vars(), ErrorCode::DimensionMismatch,
          "DiscreteFactorGraph: feature map input dim != number of variables");
  require(w_.size() == psi_.output_dim(), ErrorCode::DimensionMismatch,
          "DiscreteFactorGraph: weight length " + std::to_string(w_.size()) + " != feature dim " +
              std::to_string(psi_.output_dim()));
  for (double v : w_) require(std::isfinite(v), ErrorCode::InvalidArgument, "DiscreteFactorGraph: non-finite weight");
  space_.require_enumerable(cap_);
  if (!psi_.declared_bound()) psi_ = psi_.with_bound({1.0, Norm::LInf});
  require(psi_.declared_bound()->norm == Norm::LInf && psi_.declared_bound()->value <= 1.0,
          ErrorCode::FeatureBoundViolated, "DiscreteFactorGraph: features must satisfy ||psi||_inf <= 1");

  const std::size_t states = space_.size();
  const std::size_t f = psi_.output_dim();
  Vec x(space_.num_vars());
  Vec phi(f);
  log_probs_.resize(states);
  double top = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < states; ++s) {
    space_.decode(s, x);
    psi_.evaluate(x, phi);
    psi_.check_bound(phi);
    log_probs_[s] = dot(w_, phi);
    top = std::max(top, log_probs_[s]);
  }
  double z = 0.0;
  mean_.assign(f, 0.0);
  for (std::size_t s = 0; s < states; ++s) {
    const double e = std::exp(log_probs_[s] - top);
    z += e;
    space_.decode(s, x);
    psi_.evaluate(x, phi);
    for (std::size_t k = 0; k < f; ++k) mean_[k] += e * phi[k];
  }
  for (double& m : mean_) m /= z;
  log_z_ = top + std::log(z);
  for (double& lp : log_probs_) lp -= log_z_;
}

DiscreteFactorGraph DiscreteFactorGraph::ising(std::size_t n, Vec couplings, std::size_t cap) {
  return {StateSpace::ising(n), FeatureMap::pairwise(n).with_bound({1.0, Norm::LInf}), std::move(couplings), cap};
}

DiscreteFactorGraph DiscreteFactorGraph::ising(const SymMatrix& couplings, std::size_t cap) {
  return ising(couplings.dim(), couplings.upper_offdiag(), cap);
}

DiscreteFactorGraph DiscreteFactorGraph::with_weights(Vec w) const { return {space_, psi_, std::move(w), cap_}; }

SymMatrix DiscreteFactorGraph::coupling_matrix() const {
  require(psi_.kind() == FeatureKind::PairwiseProducts || psi_.kind() == FeatureKind::PairwiseWithField,
          ErrorCode::StructureMismatch, "coupling_matrix: feature map is not pairwise");
  const std::size_t n = num_vars();
  SymMatrix j(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) j.set(a, b, w_[pair_index(a, b, n)]);
  return j;
}

bool same_structure(const DiscreteFactorGraph& a, const DiscreteFactorGraph& b) {
  return a.space() == b.space() && a.psi() == b.psi() && a.weights().size() == b.weights().size();
}

double dfg_log_likelihood(const DiscreteFactorGraph& m, std::span<const double> x) {
  require(x.size() == m.num_vars(), ErrorCode::DimensionMismatch, "dfg_log_likelihood: wrong state length");
  m.space().encode(x);  // validates the state
  return dot(m.weights(), m.psi()(x)) - m.log_partition();
}

Vec dfg_grad(const DiscreteFactorGraph& m, std::span<const double> x) {
  m.space().encode(x);
  Vec g = m.psi()(x);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= m.feature_mean()[k];
  return g;
}

// ------------------------------------------------------------ continuous

Vec quadratic_weights(const SymMatrix& omega) {
  const std::size_t n = omega.dim();
  Vec w;
  w.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) w.push_back(i == j ? -0.5 * omega(i, i) : -omega(i, j));
  return w;
}

double quadratic_feature_norm_bound(const SymMatrix& sigma) {
  double s = 0.0;
  for (std::size_t i = 0; i < sigma.dim(); ++i)
    for (std::size_t j = i; j < sigma.dim(); ++j) s += std::sqrt(sigma(i, i) * sigma(j, j));
  return s;
}

ContinuousFactorGraph::ContinuousFactorGraph(FeatureMap psi, Vec w, double alpha_feat, Norm p)
    : psi_(std::move(psi)), w_(std::move(w)), alpha_feat_(alpha_feat), p_(p) {
  require(w_.size() == psi_.output_dim(), ErrorCode::DimensionMismatch,
          "ContinuousFactorGraph: weight length != feature dim");
  require(alpha_feat_ > 0.0 && std::isfinite(alpha_feat_), ErrorCode::InvalidArgument,
          "ContinuousFactorGraph: alpha_feat must be > 0");
  // Without x_i^2 terms the exponent is linear or constant along some
  // coordinate axis, so the integral over R^N diverges.
  if (psi_.kind() != FeatureKind::Quadratic)
    fail(ErrorCode::UnnormalizableFeatureMap,
         "ContinuousFactorGraph: feature map '" + std::string(to_string(psi_.kind())) +
             "' has no finite normalizer over R^N");
  const std::size_t n = psi_.input_dim();
  omega_ = SymMatrix(n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++k) omega_.set(i, j, i == j ? -2.0 * w_[k] : -w_[k]);
  if (!is_positive_definite(omega_))
    fail(ErrorCode::UnnormalizableFeatureMap,
         "ContinuousFactorGraph: quadratic form is not negative definite; Z(w) diverges");
  const Cholesky chol(omega_);
  log_z_ = 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi) - 0.5 * chol.log_det();
  mean_ = chol.inverse().upper_with_diag();
  const double jensen = norm(mean_, p_);
  if (alpha_feat_ < jensen * (1.0 - 1e-12))
    fail(ErrorCode::DeclaredBoundViolated, "ContinuousFactorGraph: alpha_feat=" + std::to_string(alpha_feat_) +
                                               " is below ||E psi||_p=" + std::to_string(jensen));
}

ContinuousFactorGraph ContinuousFactorGraph::from_precision(const SymMatrix& omega, double alpha_feat, Norm p) {
  return {FeatureMap::quadratic(omega.dim()), quadratic_weights(omega), alpha_feat, p};
}

ContinuousFactorGraph ContinuousFactorGraph::with_weights(Vec w) const {
  return {psi_, std::move(w), alpha_feat_, p_};
}

double cfg_log_density(const ContinuousFactorGraph& m, std::span<const double> x) {
  return dot(m.weights(), m.psi()(x)) - m.log_partition();
}

Vec cfg_grad(const ContinuousFactorGraph& m, std::span<const double> x) {
  Vec g = m.psi()(x);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= m.feature_mean()[k];
  return g;
}

}  // namespace lipgm
