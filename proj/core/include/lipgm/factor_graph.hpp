#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipgm/config.hpp"
#include "lipgm/feature_map.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"
#include "lipgm/state_space.hpp"

namespace lipgm {

/// p(x | w) = exp(w^T psi(x)) / Z(w) over a finite product space, with
/// ||psi(x)||_inf <= 1 on every state. The log-partition function and the
/// feature mean are computed once, by exhaustive enumeration, at construction.
class DiscreteFactorGraph {
 public:
  DiscreteFactorGraph(StateSpace space, FeatureMap psi, Vec w, std::size_t cap = enumeration_cap());

  /// Ising model without external field: states {-1,+1}, pairwise products,
  /// couplings ordered as in pair_index().
  static DiscreteFactorGraph ising(std::size_t n, Vec couplings, std::size_t cap = enumeration_cap());
  static DiscreteFactorGraph ising(const SymMatrix& couplings, std::size_t cap = enumeration_cap());

  const StateSpace& space() const noexcept { return space_; }
  const FeatureMap& psi() const noexcept { return psi_; }
  const Vec& weights() const noexcept { return w_; }
  std::size_t num_vars() const noexcept { return space_.num_vars(); }
  std::size_t num_states() const noexcept { return log_probs_.size(); }

  double log_partition() const noexcept { return log_z_; }
  /// E_P[psi(x)].
  const Vec& feature_mean() const noexcept { return mean_; }
  /// log p of the joint state with the given index.
  double log_prob(std::size_t state) const { return log_probs_.at(state); }
  const Vec& log_probs() const noexcept { return log_probs_; }

  /// Same structure with new weights.
  DiscreteFactorGraph with_weights(Vec w) const;
  /// Couplings as a symmetric matrix (pairwise feature maps only).
  SymMatrix coupling_matrix() const;

 private:
  StateSpace space_;
  FeatureMap psi_;
  Vec w_;
  std::size_t cap_;
  double log_z_ = 0.0;
  Vec mean_;
  Vec log_probs_;
};

bool same_structure(const DiscreteFactorGraph& a, const DiscreteFactorGraph& b);

double dfg_log_likelihood(const DiscreteFactorGraph& m, std::span<const double> x);
/// psi(x) - E_P[psi(x)].
Vec dfg_grad(const DiscreteFactorGraph& m, std::span<const double> x);

/// p(x | w) = exp(w^T psi(x)) / Z(w) on R^N. Only the quadratic family has a
/// finite normalizer among the supported feature maps; it is the Gaussian
/// with precision Omega_ii = -2 w_ii, Omega_ij = -w_ij.
class ContinuousFactorGraph {
 public:
  /// alpha_feat is the declared bound E_P[||psi(x)||_p] <= alpha_feat. It is
  /// checked against ||E_P[psi]||_p, which it must dominate.
  ContinuousFactorGraph(FeatureMap psi, Vec w, double alpha_feat, Norm p);

  static ContinuousFactorGraph from_precision(const SymMatrix& omega, double alpha_feat, Norm p);

  const FeatureMap& psi() const noexcept { return psi_; }
  const Vec& weights() const noexcept { return w_; }
  double alpha_feat() const noexcept { return alpha_feat_; }
  Norm p_norm() const noexcept { return p_; }
  std::size_t dim() const noexcept { return psi_.input_dim(); }

  double log_partition() const noexcept { return log_z_; }
  const Vec& feature_mean() const noexcept { return mean_; }
  const SymMatrix& implied_precision() const noexcept { return omega_; }

  ContinuousFactorGraph with_weights(Vec w) const;

 private:
  FeatureMap psi_;
  Vec w_;
  double alpha_feat_;
  Norm p_;
  SymMatrix omega_;
  double log_z_ = 0.0;
  Vec mean_;
};

/// Quadratic-family weights for a precision matrix.
Vec quadratic_weights(const SymMatrix& omega);
/// sum_{i<=j} sqrt(Sigma_ii Sigma_jj), an upper bound on E||psi(x)||_1 (hence
/// on every p-norm) for quadratic features under N(0, Sigma).
double quadratic_feature_norm_bound(const SymMatrix& sigma);

double cfg_log_density(const ContinuousFactorGraph& m, std::span<const double> x);
Vec cfg_grad(const ContinuousFactorGraph& m, std::span<const double> x);

}  // namespace lipgm
