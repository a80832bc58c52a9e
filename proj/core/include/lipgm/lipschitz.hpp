#pragma once

#include <span>

#include "lipgm/bayes_net.hpp"
#include "lipgm/crf.hpp"
#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

/// Gradient bound K(x) of a log-likelihood together with the norm it holds in.
struct LipschitzConstant {
  double value = 0.0;
  Norm norm = Norm::LInf;
};

/// ||x||^2/2 + 1/(2 alpha) in the spectral norm.
LipschitzConstant lipschitz_k(const GaussianModel& m, std::span<const double> x);
/// 2 in l_inf, for every state.
LipschitzConstant lipschitz_k(const DiscreteFactorGraph& m, std::span<const double> x);
/// ||psi(x)||_p + alpha_feat in the model's p-norm.
LipschitzConstant lipschitz_k(const ContinuousFactorGraph& m, std::span<const double> x);
/// 1 in l_inf.
LipschitzConstant lipschitz_k(const SoftmaxTable& t);
/// 1 in l_inf.
LipschitzConstant lipschitz_k(const LogisticCpd& c);
LipschitzConstant lipschitz_k(const LinearGaussianCpd& c, double value, std::span<const double> parent_values);
LipschitzConstant lipschitz_k(const LaplaceCpd& c, std::span<const double> parent_values);
/// N times the largest node constant; bn_lipschitz() also exposes the sum.
LipschitzConstant lipschitz_k(const BayesNet& m, std::span<const double> x, std::span<const Vec> history = {});
/// 2B in the declared norm when psi declares a bound B, otherwise
/// ||psi(y,x)||_inf + max_y' ||psi(y',x)||_inf in l_inf.
LipschitzConstant lipschitz_k(const CrfModel& m, std::span<const double> y, std::span<const double> x);

/// The constant stated for discrete models in general, next to the
/// per-model value 2 used for factor graphs.
inline constexpr double kDiscreteGeneralK = 1.0;
inline constexpr double kDiscreteFactorGraphK = 2.0;

}  // namespace lipgm
