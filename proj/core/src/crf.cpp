#include "lipgm/crf.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lipgm/errors.hpp"

namespace lipgm {

CrfModel::CrfModel(StateSpace y_space, std::size_t x_dim, FeatureMap psi, Vec w, std::size_t cap)
    : y_space_(std::move(y_space)), x_dim_(x_dim), psi_(std::move(psi)), w_(std::move(w)), cap_(cap) {
  require(psi_.input_dim() == y_space_.num_vars() + x_dim_, ErrorCode::DimensionMismatch,
          "CrfModel: feature map input dim " + std::to_string(psi_.input_dim()) + " != |y| + |x| = " +
              std::to_string(y_space_.num_vars() + x_dim_));
  require(w_.size() == psi_.output_dim(), ErrorCode::DimensionMismatch, "CrfModel: weight length != feature dim");
  for (double v : w_) require(std::isfinite(v), ErrorCode::InvalidArgument, "CrfModel: non-finite weight");
  y_space_.require_enumerable(cap_);
}

Vec CrfModel::features(std::span<const double> y, std::span<const double> x) const {
  require(y.size() == y_space_.num_vars(), ErrorCode::DimensionMismatch, "CrfModel: wrong label length");
  require(x.size() == x_dim_, ErrorCode::DimensionMismatch, "CrfModel: wrong input length");
  Vec joint(y.begin(), y.end());
  joint.insert(joint.end(), x.begin(), x.end());
  Vec phi = psi_(joint);
  if (psi_.declared_bound()) psi_.check_bound(phi);
  return phi;
}

double CrfModel::log_partition(std::span<const double> x) const {
  double top = -std::numeric_limits<double>::infinity();
  Vec scores(y_space_.size());
  for (std::size_t s = 0; s < scores.size(); ++s) {
    scores[s] = dot(w_, features(y_space_.decode(s), x));
    top = std::max(top, scores[s]);
  }
  double z = 0.0;
  for (double sc : scores) z += std::exp(sc - top);
  return top + std::log(z);
}

Vec CrfModel::feature_mean(std::span<const double> x) const {
  const double lz = log_partition(x);
  Vec mean(psi_.output_dim(), 0.0);
  for (std::size_t s = 0; s < y_space_.size(); ++s) {
    const Vec phi = features(y_space_.decode(s), x);
    const double p = std::exp(dot(w_, phi) - lz);
    for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += p * phi[k];
  }
  return mean;
}

CrfModel CrfModel::with_weights(Vec w) const { return {y_space_, x_dim_, psi_, std::move(w), cap_}; }

double crf_log_conditional(const CrfModel& m, std::span<const double> y, std::span<const double> x) {
  m.y_space().encode(y);
  return dot(m.weights(), m.features(y, x)) - m.log_partition(x);
}

Vec crf_grad(const CrfModel& m, std::span<const double> y, std::span<const double> x) {
  m.y_space().encode(y);
  Vec g = m.features(y, x);
  const Vec mean = m.feature_mean(x);
  for (std::size_t k = 0; k < g.size(); ++k) g[k] -= mean[k];
  return g;
}

}  // namespace lipgm
