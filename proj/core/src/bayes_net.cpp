#include "lipgm/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <type_traits>

#include "lipgm/errors.hpp"

namespace lipgm {

namespace {

std::size_t as_index(double v, std::size_t card, const char* what) {
  const auto s = static_cast<long long>(std::llround(v));
  require(v == static_cast<double>(s) && s >= 0 && static_cast<std::size_t>(s) < card, ErrorCode::IndexOutOfRange,
          std::string(what) + ": value " + std::to_string(v) + " outside 0.." + std::to_string(card - 1));
  return static_cast<std::size_t>(s);
}

// log(sum_k exp(s_k) + 1), the softmax normalizer with the reference class.
double log_normalizer(std::span<const double> scores) {
  double top = 0.0;
  for (double s : scores) top = std::max(top, s);
  double z = std::exp(-top);
  for (double s : scores) z += std::exp(s - top);
  return top + std::log(z);
}

}  // namespace

// ---------------------------------------------------------- SoftmaxTable

SoftmaxTable::SoftmaxTable(std::size_t cardinality, std::vector<std::size_t> parent_cardinalities,
                           std::vector<Vec> weights)
    : card_(cardinality), parent_cards_(std::move(parent_cardinalities)), weights_(std::move(weights)) {
  require(card_ >= 2, ErrorCode::InvalidArgument, "SoftmaxTable: cardinality must be >= 2");
  std::size_t configs = 1;
  for (std::size_t c : parent_cards_) {
    require(c >= 1, ErrorCode::InvalidArgument, "SoftmaxTable: zero parent cardinality");
    configs *= c;
  }
  require(weights_.size() == configs, ErrorCode::DimensionMismatch,
          "SoftmaxTable: expected one weight vector per parent configuration (" + std::to_string(configs) + ")");
  for (const Vec& w : weights_) {
    require(w.size() == card_ - 1, ErrorCode::DimensionMismatch, "SoftmaxTable: weight vectors need X-1 entries");
    for (double v : w) require(std::isfinite(v), ErrorCode::InvalidArgument, "SoftmaxTable: non-finite weight");
  }
}

SoftmaxTable SoftmaxTable::zeros(std::size_t cardinality, std::vector<std::size_t> parent_cardinalities) {
  std::size_t configs = 1;
  for (std::size_t c : parent_cardinalities) configs *= c;
  return {cardinality, std::move(parent_cardinalities), std::vector<Vec>(configs, Vec(cardinality - 1, 0.0))};
}

std::size_t SoftmaxTable::config_index(std::span<const double> parent_values) const {
  require(parent_values.size() == parent_cards_.size(), ErrorCode::DimensionMismatch,
          "SoftmaxTable: wrong number of parent values");
  std::size_t j = 0;
  for (std::size_t p = 0; p < parent_cards_.size(); ++p)
    j = j * parent_cards_[p] + as_index(parent_values[p], parent_cards_[p], "SoftmaxTable parent");
  return j;
}

double SoftmaxTable::log_prob(std::size_t value, std::size_t config) const {
  require(value < card_, ErrorCode::IndexOutOfRange, "SoftmaxTable: class index out of range");
  require(config < weights_.size(), ErrorCode::IndexOutOfRange, "SoftmaxTable: parent configuration out of range");
  const Vec& w = weights_[config];
  const double numer = value + 1 < card_ ? w[value] : 0.0;
  return numer - log_normalizer(w);
}

Vec SoftmaxTable::grad(std::size_t value, std::size_t config) const {
  require(value < card_, ErrorCode::IndexOutOfRange, "SoftmaxTable: class index out of range");
  require(config < weights_.size(), ErrorCode::IndexOutOfRange, "SoftmaxTable: parent configuration out of range");
  Vec g(num_parameters(), 0.0);
  const Vec& w = weights_[config];
  const double lz = log_normalizer(w);
  for (std::size_t k = 0; k + 1 < card_; ++k)
    g[config * (card_ - 1) + k] = (k == value ? 1.0 : 0.0) - std::exp(w[k] - lz);
  return g;
}

Vec SoftmaxTable::parameters() const {
  Vec theta;
  theta.reserve(num_parameters());
  for (const Vec& w : weights_) theta.insert(theta.end(), w.begin(), w.end());
  return theta;
}

SoftmaxTable SoftmaxTable::with_parameters(std::span<const double> theta) const {
  require(theta.size() == num_parameters(), ErrorCode::DimensionMismatch, "SoftmaxTable: parameter length mismatch");
  std::vector<Vec> w(weights_.size());
  for (std::size_t j = 0; j < w.size(); ++j)
    w[j].assign(theta.begin() + static_cast<std::ptrdiff_t>(j * (card_ - 1)),
                theta.begin() + static_cast<std::ptrdiff_t>((j + 1) * (card_ - 1)));
  return {card_, parent_cards_, std::move(w)};
}

double softmax_log_cpd(const SoftmaxTable& t, std::size_t value, std::size_t config) {
  return t.log_prob(value, config);
}

// ----------------------------------------------------------- LogisticCpd

LogisticCpd::LogisticCpd(std::size_t cardinality, FeatureMap psi, std::vector<Vec> weights)
    : card_(cardinality), psi_(std::move(psi)), weights_(std::move(weights)) {
  require(card_ >= 2, ErrorCode::InvalidArgument, "LogisticCpd: cardinality must be >= 2");
  require(weights_.size() == card_ - 1, ErrorCode::DimensionMismatch, "LogisticCpd: need X-1 weight vectors");
  for (const Vec& w : weights_)
    require(w.size() == psi_.output_dim(), ErrorCode::DimensionMismatch,
            "LogisticCpd: weight length != feature dim");
  if (!psi_.declared_bound()) psi_ = psi_.with_bound({1.0, Norm::LInf});
}

Vec LogisticCpd::checked_features(std::span<const double> parent_values) const {
  Vec phi = psi_(parent_values);
  if (norm_inf(phi) > 1.0 + 1e-12)
    fail(ErrorCode::FeatureBoundViolated,
         "LogisticCpd: ||psi||_inf = " + std::to_string(norm_inf(phi)) + " exceeds 1");
  psi_.check_bound(phi);
  return phi;
}

Vec LogisticCpd::probabilities(std::span<const double> phi) const {
  Vec scores(card_ - 1);
  for (std::size_t k = 0; k + 1 < card_; ++k) scores[k] = dot(weights_[k], phi);
  const double lz = log_normalizer(scores);
  Vec p(card_);
  for (std::size_t k = 0; k + 1 < card_; ++k) p[k] = std::exp(scores[k] - lz);
  p[card_ - 1] = std::exp(-lz);
  return p;
}

double LogisticCpd::log_prob(std::size_t value, std::span<const double> parent_values) const {
  require(value < card_, ErrorCode::IndexOutOfRange, "LogisticCpd: class index out of range");
  const Vec phi = checked_features(parent_values);
  Vec scores(card_ - 1);
  for (std::size_t k = 0; k + 1 < card_; ++k) scores[k] = dot(weights_[k], phi);
  const double numer = value + 1 < card_ ? scores[value] : 0.0;
  return numer - log_normalizer(scores);
}

Vec LogisticCpd::grad(std::size_t value, std::span<const double> parent_values) const {
  require(value < card_, ErrorCode::IndexOutOfRange, "LogisticCpd: class index out of range");
  const Vec phi = checked_features(parent_values);
  const Vec p = probabilities(phi);
  const std::size_t f = psi_.output_dim();
  Vec g(num_parameters());
  for (std::size_t k = 0; k + 1 < card_; ++k) {
    const double coef = (k == value ? 1.0 : 0.0) - p[k];
    for (std::size_t q = 0; q < f; ++q) g[k * f + q] = coef * phi[q];
  }
  return g;
}

Vec LogisticCpd::parameters() const {
  Vec theta;
  theta.reserve(num_parameters());
  for (const Vec& w : weights_) theta.insert(theta.end(), w.begin(), w.end());
  return theta;
}

LogisticCpd LogisticCpd::with_parameters(std::span<const double> theta) const {
  require(theta.size() == num_parameters(), ErrorCode::DimensionMismatch, "LogisticCpd: parameter length mismatch");
  const std::size_t f = psi_.output_dim();
  std::vector<Vec> w(card_ - 1);
  for (std::size_t k = 0; k < w.size(); ++k)
    w[k].assign(theta.begin() + static_cast<std::ptrdiff_t>(k * f),
                theta.begin() + static_cast<std::ptrdiff_t>((k + 1) * f));
  return {card_, psi_, std::move(w)};
}

double logistic_log_cpd(const LogisticCpd& c, std::size_t value, std::span<const double> parent_values) {
  return c.log_prob(value, parent_values);
}

// ----------------------------------------------------- LinearGaussianCpd

LinearGaussianCpd::LinearGaussianCpd(FeatureMap psi, Vec w, double beta_w)
    : psi_(std::move(psi)), w_(std::move(w)), beta_w_(beta_w) {
  require(w_.size() == psi_.output_dim(), ErrorCode::DimensionMismatch,
          "LinearGaussianCpd: weight length != feature dim");
  require(beta_w_ >= 0.0 && std::isfinite(beta_w_), ErrorCode::InvalidArgument,
          "LinearGaussianCpd: beta_w must be finite and >= 0");
  const double wn = norm2(w_);
  if (wn > beta_w_ * (1.0 + 1e-12))
    fail(ErrorCode::DeclaredBoundViolated,
         "LinearGaussianCpd: ||w||_2=" + std::to_string(wn) + " exceeds beta_w=" + std::to_string(beta_w_));
}

double LinearGaussianCpd::log_prob(double value, std::span<const double> parent_values) const {
  const double r = value - dot(w_, psi_(parent_values));
  return -0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * r * r;
}

Vec LinearGaussianCpd::grad(double value, std::span<const double> parent_values) const {
  Vec phi = psi_(parent_values);
  const double r = value - dot(w_, phi);
  for (double& v : phi) v *= r;
  return phi;
}

double LinearGaussianCpd::lipschitz(double value, std::span<const double> parent_values) const {
  const double pn = norm2(psi_(parent_values));
  return pn * std::abs(value) + beta_w_ * pn * pn;
}

LinearGaussianCpd LinearGaussianCpd::with_parameters(std::span<const double> theta) const {
  return {psi_, Vec(theta.begin(), theta.end()), beta_w_};
}

double gaussian_cpd_log(const LinearGaussianCpd& c, double value, std::span<const double> parent_values) {
  return c.log_prob(value, parent_values);
}

// ------------------------------------------------------------ LaplaceCpd

LaplaceCpd::LaplaceCpd(FeatureMap psi, Vec w) : psi_(std::move(psi)), w_(std::move(w)) {
  require(w_.size() == psi_.output_dim(), ErrorCode::DimensionMismatch, "LaplaceCpd: weight length != feature dim");
}

double LaplaceCpd::log_prob(double value, std::span<const double> parent_values) const {
  return -std::numbers::ln2 - std::abs(value - dot(w_, psi_(parent_values)));
}

Vec LaplaceCpd::grad(double value, std::span<const double> parent_values) const {
  Vec phi = psi_(parent_values);
  const double r = value - dot(w_, phi);
  const double s = r > 0.0 ? 1.0 : (r < 0.0 ? -1.0 : 0.0);
  for (double& v : phi) v *= s;
  return phi;
}

double LaplaceCpd::lipschitz(std::span<const double> parent_values) const { return norm2(psi_(parent_values)); }

LaplaceCpd LaplaceCpd::with_parameters(std::span<const double> theta) const {
  return {psi_, Vec(theta.begin(), theta.end())};
}

double laplace_cpd_log(const LaplaceCpd& c, double value, std::span<const double> parent_values) {
  return c.log_prob(value, parent_values);
}

// -------------------------------------------------------------- BayesNet

namespace {

std::size_t cpd_parameters(const Cpd& cpd) {
  return std::visit([](const auto& c) { return c.num_parameters(); }, cpd);
}

std::size_t cpd_input_dim(const Cpd& cpd) {
  return std::visit(
      [](const auto& c) -> std::size_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(c)>, SoftmaxTable>)
          return c.parent_cardinalities().size();
        else
          return c.psi().input_dim();
      },
      cpd);
}

}  // namespace

BayesNet::BayesNet(std::vector<BnNode> nodes, std::size_t order) : nodes_(std::move(nodes)), order_(order) {
  const std::size_t n = nodes_.size();
  require(n >= 1, ErrorCode::InvalidArgument, "BayesNet: no nodes");
  std::vector<std::vector<std::size_t>> children(n);
  std::vector<std::size_t> indegree(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const BnNode& node = nodes_[v];
    require(node.parents.size() == cpd_input_dim(node.cpd), ErrorCode::DimensionMismatch,
            "BayesNet: node " + std::to_string(v) + " has " + std::to_string(node.parents.size()) +
                " parents but its conditional expects " + std::to_string(cpd_input_dim(node.cpd)));
    for (const ParentRef& p : node.parents) {
      require(p.node < n, ErrorCode::IndexOutOfRange, "BayesNet: parent index out of range");
      require(p.lag <= order_, ErrorCode::InvalidArgument,
              "BayesNet: parent lag " + std::to_string(p.lag) + " exceeds order " + std::to_string(order_));
      if (p.lag == 0) {
        require(p.node != v, ErrorCode::InvalidArgument, "BayesNet: self loop at lag 0");
        children[p.node].push_back(v);
        ++indegree[v];
      }
    }
  }
  std::vector<std::size_t> ready;
  for (std::size_t v = 0; v < n; ++v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.erase(ready.begin());
    topo_.push_back(v);
    for (std::size_t c : children[v])
      if (--indegree[c] == 0) ready.push_back(c);
  }
  require(topo_.size() == n, ErrorCode::InvalidArgument, "BayesNet: lag-0 edges contain a cycle");
}

Vec BayesNet::parent_values(std::size_t node, std::span<const double> x, std::span<const Vec> history) const {
  require(x.size() == nodes_.size(), ErrorCode::DimensionMismatch, "BayesNet: assignment must cover all nodes");
  const auto& parents = nodes_.at(node).parents;
  Vec out(parents.size());
  for (std::size_t k = 0; k < parents.size(); ++k) {
    const ParentRef& p = parents[k];
    if (p.lag == 0) {
      out[k] = x[p.node];
      continue;
    }
    if (p.lag > history.size())
      fail(ErrorCode::MissingLagValues, "BayesNet: node " + std::to_string(node) + " needs values " +
                                            std::to_string(p.lag) + " steps back, history has " +
                                            std::to_string(history.size()));
    const Vec& past = history[p.lag - 1];
    require(past.size() == nodes_.size(), ErrorCode::DimensionMismatch, "BayesNet: history row has wrong length");
    out[k] = past[p.node];
  }
  return out;
}

Vec BayesNet::parameters() const {
  Vec theta;
  for (const BnNode& node : nodes_) {
    const Vec t = std::visit([](const auto& c) { return c.parameters(); }, node.cpd);
    theta.insert(theta.end(), t.begin(), t.end());
  }
  return theta;
}

std::size_t BayesNet::num_parameters() const {
  std::size_t total = 0;
  for (const BnNode& node : nodes_) total += cpd_parameters(node.cpd);
  return total;
}

BayesNet BayesNet::with_parameters(std::span<const double> theta) const {
  require(theta.size() == num_parameters(), ErrorCode::DimensionMismatch, "BayesNet: parameter length mismatch");
  std::vector<BnNode> nodes;
  nodes.reserve(nodes_.size());
  std::size_t offset = 0;
  for (const BnNode& node : nodes_) {
    const std::size_t k = cpd_parameters(node.cpd);
    const auto part = theta.subspan(offset, k);
    offset += k;
    nodes.push_back({node.parents, std::visit([&](const auto& c) -> Cpd { return c.with_parameters(part); }, node.cpd)});
  }
  return BayesNet(std::move(nodes), order_);
}

double bn_log_likelihood(const BayesNet& m, std::span<const double> x, std::span<const Vec> history) {
  double total = 0.0;
  for (std::size_t v = 0; v < m.num_nodes(); ++v) {
    const Vec pv = m.parent_values(v, x, history);
    const Cpd& cpd = m.nodes()[v].cpd;
    if (const auto* t = std::get_if<SoftmaxTable>(&cpd))
      total += t->log_prob(as_index(x[v], t->cardinality(), "SoftmaxTable node"), t->config_index(pv));
    else if (const auto* l = std::get_if<LogisticCpd>(&cpd))
      total += l->log_prob(as_index(x[v], l->cardinality(), "LogisticCpd node"), pv);
    else if (const auto* g = std::get_if<LinearGaussianCpd>(&cpd))
      total += g->log_prob(x[v], pv);
    else
      total += std::get<LaplaceCpd>(cpd).log_prob(x[v], pv);
  }
  return total;
}

Vec bn_grad(const BayesNet& m, std::span<const double> x, std::span<const Vec> history) {
  Vec g;
  g.reserve(m.num_parameters());
  for (std::size_t v = 0; v < m.num_nodes(); ++v) {
    const Vec pv = m.parent_values(v, x, history);
    const Cpd& cpd = m.nodes()[v].cpd;
    Vec part;
    if (const auto* t = std::get_if<SoftmaxTable>(&cpd))
      part = t->grad(as_index(x[v], t->cardinality(), "SoftmaxTable node"), t->config_index(pv));
    else if (const auto* l = std::get_if<LogisticCpd>(&cpd))
      part = l->grad(as_index(x[v], l->cardinality(), "LogisticCpd node"), pv);
    else if (const auto* gc = std::get_if<LinearGaussianCpd>(&cpd))
      part = gc->grad(x[v], pv);
    else
      part = std::get<LaplaceCpd>(cpd).grad(x[v], pv);
    g.insert(g.end(), part.begin(), part.end());
  }
  return g;
}

BayesNetLipschitz bn_lipschitz(const BayesNet& m, std::span<const double> x, std::span<const Vec> history) {
  BayesNetLipschitz out;
  std::vector<Norm> norms;
  for (std::size_t v = 0; v < m.num_nodes(); ++v) {
    const Vec pv = m.parent_values(v, x, history);
    const Cpd& cpd = m.nodes()[v].cpd;
    if (std::holds_alternative<SoftmaxTable>(cpd) || std::holds_alternative<LogisticCpd>(cpd)) {
      out.per_node.push_back(1.0);
      norms.push_back(Norm::LInf);
    } else if (const auto* g = std::get_if<LinearGaussianCpd>(&cpd)) {
      out.per_node.push_back(g->lipschitz(x[v], pv));
      norms.push_back(Norm::L2);
    } else {
      out.per_node.push_back(std::get<LaplaceCpd>(cpd).lipschitz(pv));
      norms.push_back(Norm::L2);
    }
  }
  const bool mixed = std::any_of(norms.begin(), norms.end(), [](Norm n) { return n == Norm::L2; }) &&
                     std::any_of(norms.begin(), norms.end(), [](Norm n) { return n == Norm::LInf; });
  out.norm = norms.front();
  if (mixed) {
    out.norm = Norm::L2;
    for (std::size_t v = 0; v < m.num_nodes(); ++v)
      if (norms[v] == Norm::LInf)
        out.per_node[v] *= std::sqrt(static_cast<double>(cpd_parameters(m.nodes()[v].cpd)));
  }
  double top = 0.0;
  for (double k : out.per_node) {
    top = std::max(top, k);
    out.sum += k;
  }
  out.n_times_max = static_cast<double>(m.num_nodes()) * top;
  return out;
}

}  // namespace lipgm
