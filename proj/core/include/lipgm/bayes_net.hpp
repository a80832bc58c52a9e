#pragma once

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "lipgm/feature_map.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

// Discrete values are integer-coded 0..cardinality-1. The last class is the
// reference class whose exponent is fixed at 0.

/// Conditional probability table in softmax form: one weight vector of
/// length cardinality-1 per parent configuration.
class SoftmaxTable {
 public:
  SoftmaxTable(std::size_t cardinality, std::vector<std::size_t> parent_cardinalities, std::vector<Vec> weights);
  static SoftmaxTable zeros(std::size_t cardinality, std::vector<std::size_t> parent_cardinalities);

  std::size_t cardinality() const noexcept { return card_; }
  const std::vector<std::size_t>& parent_cardinalities() const noexcept { return parent_cards_; }
  std::size_t num_configs() const noexcept { return weights_.size(); }
  const std::vector<Vec>& weights() const noexcept { return weights_; }

  /// Mixed-radix index of the parent values (first parent slowest).
  std::size_t config_index(std::span<const double> parent_values) const;

  double log_prob(std::size_t value, std::size_t config) const;
  /// Gradient with respect to parameters() at (value, config).
  Vec grad(std::size_t value, std::size_t config) const;

  Vec parameters() const;
  SoftmaxTable with_parameters(std::span<const double> theta) const;
  std::size_t num_parameters() const noexcept { return weights_.size() * (card_ - 1); }

 private:
  std::size_t card_;
  std::vector<std::size_t> parent_cards_;
  std::vector<Vec> weights_;
};

/// Multinomial logistic regression on features of the parents; the feature
/// map must satisfy ||psi||_inf <= 1.
class LogisticCpd {
 public:
  LogisticCpd(std::size_t cardinality, FeatureMap psi, std::vector<Vec> weights);

  std::size_t cardinality() const noexcept { return card_; }
  const FeatureMap& psi() const noexcept { return psi_; }
  const std::vector<Vec>& weights() const noexcept { return weights_; }

  /// Throws FeatureBoundViolated when ||psi(parents)||_inf > 1.
  double log_prob(std::size_t value, std::span<const double> parent_values) const;
  Vec grad(std::size_t value, std::span<const double> parent_values) const;

  Vec parameters() const;
  LogisticCpd with_parameters(std::span<const double> theta) const;
  std::size_t num_parameters() const noexcept { return (card_ - 1) * psi_.output_dim(); }

 private:
  Vec checked_features(std::span<const double> parent_values) const;
  Vec probabilities(std::span<const double> phi) const;

  std::size_t card_;
  FeatureMap psi_;
  std::vector<Vec> weights_;
};

/// x_n | parents ~ N(w^T psi(parents), 1), with declared ||w||_2 <= beta_w.
class LinearGaussianCpd {
 public:
  LinearGaussianCpd(FeatureMap psi, Vec w, double beta_w);

  const FeatureMap& psi() const noexcept { return psi_; }
  const Vec& weights() const noexcept { return w_; }
  double beta_w() const noexcept { return beta_w_; }

  double log_prob(double value, std::span<const double> parent_values) const;
  Vec grad(double value, std::span<const double> parent_values) const;
  /// ||psi||_2 |x_n| + beta_w ||psi||_2^2.
  double lipschitz(double value, std::span<const double> parent_values) const;

  Vec parameters() const { return w_; }
  LinearGaussianCpd with_parameters(std::span<const double> theta) const;
  std::size_t num_parameters() const noexcept { return w_.size(); }

 private:
  FeatureMap psi_;
  Vec w_;
  double beta_w_;
};

/// x_n | parents ~ Laplace(w^T psi(parents), 1).
class LaplaceCpd {
 public:
  LaplaceCpd(FeatureMap psi, Vec w);

  const FeatureMap& psi() const noexcept { return psi_; }
  const Vec& weights() const noexcept { return w_; }

  double log_prob(double value, std::span<const double> parent_values) const;
  /// The subgradient psi * sign(residual); sign(0) is taken as 0.
  Vec grad(double value, std::span<const double> parent_values) const;
  /// ||psi||_2.
  double lipschitz(std::span<const double> parent_values) const;

  Vec parameters() const { return w_; }
  LaplaceCpd with_parameters(std::span<const double> theta) const;
  std::size_t num_parameters() const noexcept { return w_.size(); }

 private:
  FeatureMap psi_;
  Vec w_;
};

double softmax_log_cpd(const SoftmaxTable& t, std::size_t value, std::size_t config);
double logistic_log_cpd(const LogisticCpd& c, std::size_t value, std::span<const double> parent_values);
double gaussian_cpd_log(const LinearGaussianCpd& c, double value, std::span<const double> parent_values);
double laplace_cpd_log(const LaplaceCpd& c, double value, std::span<const double> parent_values);

using Cpd = std::variant<SoftmaxTable, LogisticCpd, LinearGaussianCpd, LaplaceCpd>;

struct ParentRef {
  std::size_t node = 0;
  std::size_t lag = 0;  // 0 = same time step, l = l steps back
};

struct BnNode {
  std::vector<ParentRef> parents;
  Cpd cpd;
};

/// Directed model p(x^(t) | x^(t-1..t-L)) = prod_n p(x_n | parents). With
/// order 0 this is an ordinary Bayesian network.
class BayesNet {
 public:
  explicit BayesNet(std::vector<BnNode> nodes, std::size_t order = 0);

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t order() const noexcept { return order_; }
  const std::vector<BnNode>& nodes() const noexcept { return nodes_; }
  /// A topological order of the lag-0 edges.
  const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

  /// Parent values of `node` given the current assignment and history
  /// (history[l-1] holds the assignment l steps back).
  Vec parent_values(std::size_t node, std::span<const double> x, std::span<const Vec> history) const;

  Vec parameters() const;
  BayesNet with_parameters(std::span<const double> theta) const;
  std::size_t num_parameters() const;

 private:
  std::vector<BnNode> nodes_;
  std::size_t order_;
  std::vector<std::size_t> topo_;
};

/// Sum of node conditional log-probabilities. Throws MissingLagValues when a
/// parent refers further back than the supplied history.
double bn_log_likelihood(const BayesNet& m, std::span<const double> x, std::span<const Vec> history = {});
Vec bn_grad(const BayesNet& m, std::span<const double> x, std::span<const Vec> history = {});

struct BayesNetLipschitz {
  Norm norm = Norm::LInf;
  double n_times_max = 0.0;  // N * max_n K_n
  double sum = 0.0;          // sum_n K_n, never larger
  Vec per_node;
};

/// Per-node constants combined over the network. Discrete nodes hold in
/// l_inf and continuous ones in l_2; when both occur, l_inf constants are
/// converted with ||g||_2 <= sqrt(d) ||g||_inf and the result is in l_2.
BayesNetLipschitz bn_lipschitz(const BayesNet& m, std::span<const double> x, std::span<const Vec> history = {});

}  // namespace lipgm
