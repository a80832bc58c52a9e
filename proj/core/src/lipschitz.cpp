#include "lipgm/lipschitz.hpp"

#include <algorithm>

#include "lipgm/errors.hpp"

namespace lipgm {

LipschitzConstant lipschitz_k(const GaussianModel& m, std::span<const double> x) {
  return {ggm_lipschitz_k(m, x), Norm::L2};
}

LipschitzConstant lipschitz_k(const DiscreteFactorGraph& m, std::span<const double> x) {
  m.space().encode(x);
  return {kDiscreteFactorGraphK, Norm::LInf};
}

LipschitzConstant lipschitz_k(const ContinuousFactorGraph& m, std::span<const double> x) {
  return {norm(m.psi()(x), m.p_norm()) + m.alpha_feat(), m.p_norm()};
}

LipschitzConstant lipschitz_k(const SoftmaxTable&) { return {1.0, Norm::LInf}; }

LipschitzConstant lipschitz_k(const LogisticCpd&) { return {1.0, Norm::LInf}; }

LipschitzConstant lipschitz_k(const LinearGaussianCpd& c, double value, std::span<const double> parent_values) {
  return {c.lipschitz(value, parent_values), Norm::L2};
}

LipschitzConstant lipschitz_k(const LaplaceCpd& c, std::span<const double> parent_values) {
  return {c.lipschitz(parent_values), Norm::L2};
}

LipschitzConstant lipschitz_k(const BayesNet& m, std::span<const double> x, std::span<const Vec> history) {
  const BayesNetLipschitz k = bn_lipschitz(m, x, history);
  return {k.n_times_max, k.norm};
}

LipschitzConstant lipschitz_k(const CrfModel& m, std::span<const double> y, std::span<const double> x) {
  if (const auto& b = m.psi().declared_bound()) return {2.0 * b->value, b->norm};
  double top = 0.0;
  for (std::size_t s = 0; s < m.y_space().size(); ++s)
    top = std::max(top, norm_inf(m.features(m.y_space().decode(s), x)));
  return {norm_inf(m.features(y, x)) + top, Norm::LInf};
}

}  // namespace lipgm
