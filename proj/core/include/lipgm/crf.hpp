#pragma once

#include <cstddef>
#include <span>

#include "lipgm/config.hpp"
#include "lipgm/feature_map.hpp"
#include "lipgm/numerics.hpp"
#include "lipgm/state_space.hpp"

namespace lipgm {

/// Conditional random field p(y | x, w) = exp(w^T psi(y, x)) / Z(x, w) over an
/// enumerable label space. psi takes the concatenation (y, x).
class CrfModel {
 public:
  CrfModel(StateSpace y_space, std::size_t x_dim, FeatureMap psi, Vec w, std::size_t cap = enumeration_cap());

  const StateSpace& y_space() const noexcept { return y_space_; }
  std::size_t x_dim() const noexcept { return x_dim_; }
  const FeatureMap& psi() const noexcept { return psi_; }
  const Vec& weights() const noexcept { return w_; }

  /// psi evaluated on (y, x).
  Vec features(std::span<const double> y, std::span<const double> x) const;
  /// log Z(x, w) by enumeration over y_space.
  double log_partition(std::span<const double> x) const;
  /// E_{y ~ p(.|x)}[psi(y, x)].
  Vec feature_mean(std::span<const double> x) const;

  CrfModel with_weights(Vec w) const;

 private:
  StateSpace y_space_;
  std::size_t x_dim_;
  FeatureMap psi_;
  Vec w_;
  std::size_t cap_;
};

double crf_log_conditional(const CrfModel& m, std::span<const double> y, std::span<const double> x);
/// psi(y, x) - E_{y'|x}[psi(y', x)].
Vec crf_grad(const CrfModel& m, std::span<const double> y, std::span<const double> x);

}  // namespace lipgm
