#include "lipgm/bound_report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <json.hpp>

#include "lipgm/errors.hpp"
#include "lipgm/rng.hpp"

namespace lipgm {

namespace {

constexpr double kSlack = 1e-9;

void add_exact(BoundReport& r, std::string name, double lhs, double rhs, CheckKind kind = CheckKind::Exact) {
  r.checks.push_back({std::move(name), lhs, rhs, 0.0, lhs <= rhs + kSlack, kind});
}

void add_estimate(BoundReport& r, std::string name, double lhs, double rhs, double se) {
  r.checks.push_back({std::move(name), lhs, rhs, se, lhs - 3.0 * se <= rhs + kSlack, CheckKind::Estimate});
}

std::string_view to_string(CheckKind k) {
  switch (k) {
    case CheckKind::Exact: return "exact";
    case CheckKind::Estimate: return "estimate";
    case CheckKind::Stated: return "stated";
  }
  return "exact";
}

nlohmann::json opt(const std::optional<double>& v) { return v ? nlohmann::json(*v) : nlohmann::json(nullptr); }

nlohmann::json opt(const std::optional<McEstimate>& v) {
  if (!v) return nullptr;
  return {{"estimate", v->estimate}, {"std_error", v->std_error}, {"samples", v->samples}};
}

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

}  // namespace

bool BoundReport::satisfied() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const BoundCheck& c) { return c.ok || c.kind == CheckKind::Stated; });
}

BoundReport bound_report(const GaussianModel& m1, const GaussianModel& m2, std::uint64_t seed,
                         std::size_t mc_samples, const NumericConfig& cfg) {
  require(m1.dim() == m2.dim(), ErrorCode::StructureMismatch, "bound_report: Gaussian models differ in dimension");
  BoundReport r;
  r.kind = "ggm";
  r.p_norm = Norm::L1;
  const SymMatrix delta = m1.omega() - m2.omega();
  const double alpha = std::min(m1.alpha(), m2.alpha());
  r.param_distance = nuclear_norm(delta, cfg);
  r.lipschitz_kbar = gaussian_kbar(m1, alpha);
  r.kl_exact = kl_gaussian(m1, m2);
  r.kl_bound = r.lipschitz_kbar * r.param_distance;
  add_exact(r, "kl", *r.kl_exact, r.kl_bound);

  r.spectral_kl_bound = kl_gaussian_bound(m1, m2, cfg);
  add_exact(r, "kl_spectral", *r.kl_exact, *r.spectral_kl_bound, CheckKind::Stated);
  r.loose_kbar = loose_gaussian_kbar(alpha, std::max(m1.beta(), m2.beta()), m1.dim());
  r.kbar_mc = gaussian_kbar_mc(m1, alpha, 10000, derive_seed(seed, 1));

  r.entropy = gaussian_entropy(m1);
  r.expected_ll = expected_ll_gaussian(m1.covariance(), m2);
  add_exact(r, "expected_ll_lower", -*r.entropy - r.lipschitz_kbar * r.param_distance, *r.expected_ll);
  const double identity_gap = std::abs(*r.expected_ll - (-*r.entropy - *r.kl_exact));
  r.checks.push_back({"expected_ll_identity", identity_gap, 1e-8, 0.0, identity_gap <= 1e-8, CheckKind::Exact});

  const BayesErrorBounds b = bayes_error_bounds(m1, m2, r.param_distance);
  r.bb = b.bb;
  r.bayes_error_lower = b.bb_over_4;
  r.k_tilde = b.k_tilde;
  r.neg_log_be_upper = b.neg_log_upper;
  if (m1.omega() == m2.omega()) {
    r.bayes_error_exact = 0.5;
    add_exact(r, "be_lower", r.bayes_error_lower, 0.5);
    add_exact(r, "neg_log_be_upper", std::log(2.0), r.neg_log_be_upper);
  } else {
    r.bayes_error_mc = bayes_error_gaussian_mc(m1, m2, mc_samples, derive_seed(seed, 2));
    const double be = r.bayes_error_mc->estimate;
    const double se = r.bayes_error_mc->std_error;
    add_estimate(r, "be_lower", r.bayes_error_lower, be, se);
    add_estimate(r, "be_half", be, 0.5, se);
    // -log BE <= U  <=>  exp(-U) <= BE
    add_estimate(r, "neg_log_be_upper", std::exp(-r.neg_log_be_upper), be, se);
  }
  return r;
}

BoundReport bound_report(const DiscreteFactorGraph& m1, const DiscreteFactorGraph& m2, Norm p) {
  require(same_structure(m1, m2), ErrorCode::StructureMismatch,
          "bound_report: factor graphs differ in state space or feature map");
  BoundReport r;
  r.kind = "dfg";
  r.p_norm = p;
  r.param_distance = param_distance(m1.weights(), m2.weights(), p);
  const double k = dfg_lipschitz_for_distance(m1, p);
  r.lipschitz_kbar = k;
  r.kl_exact = kl_discrete_exact(m1, m2);
  r.kl_bound = kl_bound_generic(k, m1.weights(), m2.weights(), p);
  add_exact(r, "kl", *r.kl_exact, r.kl_bound);

  r.entropy = discrete_entropy(m1);
  r.expected_ll = expected_ll_discrete(m1, m2);
  add_exact(r, "expected_ll_lower", -*r.entropy - r.lipschitz_kbar * r.param_distance, *r.expected_ll);
  add_exact(r, "expected_ll_upper", *r.expected_ll, 0.0);

  r.bayes_error_exact = bayes_error_discrete(m1, m2);
  const BayesErrorBounds b = bayes_error_bounds(m1, m2, p);
  r.bb = b.bb;
  r.bayes_error_lower = b.bb_over_4;
  r.k_tilde = b.k_tilde;
  r.neg_log_be_upper = b.neg_log_upper;
  const double neg_log_be = -std::log(*r.bayes_error_exact);
  add_exact(r, "be_lower", r.bayes_error_lower, *r.bayes_error_exact);
  add_exact(r, "neg_log_be_lower", std::log(2.0), neg_log_be);
  add_exact(r, "neg_log_be_upper", neg_log_be, r.neg_log_be_upper);

  if (p != Norm::L1) {
    // The per-model constant 2 measured against the same norm p.
    add_exact(r, "kl_stated", *r.kl_exact, kl_bound_generic(2.0, m1.weights(), m2.weights(), p), CheckKind::Stated);
    const BayesErrorBounds s = bayes_error_bounds(m1, m2, p, 2.0);
    add_exact(r, "be_lower_stated", s.bb_over_4, *r.bayes_error_exact, CheckKind::Stated);
    add_exact(r, "neg_log_be_upper_stated", neg_log_be, s.neg_log_upper, CheckKind::Stated);
  }
  return r;
}

BoundReport bound_report(const ContinuousFactorGraph& m1, const ContinuousFactorGraph& m2, std::uint64_t seed,
                         std::size_t mc_samples) {
  BoundReport r;
  r.kind = "cfg";
  const double alpha = cfg_segment_alpha(m1, m2);
  r.p_norm = dual(m1.p_norm());
  r.param_distance = param_distance(m1.weights(), m2.weights(), r.p_norm);
  r.lipschitz_kbar = 2.0 * alpha;
  r.kl_exact = kl_cfg_exact(m1, m2);
  r.kl_bound = kl_cfg_bound(m1, m2);
  add_exact(r, "kl", *r.kl_exact, r.kl_bound);

  const GaussianModel g1 = GaussianModel::with_tight_bounds(m1.implied_precision());
  const GaussianModel g2 = GaussianModel::with_tight_bounds(m2.implied_precision());
  r.entropy = gaussian_entropy(g1);
  r.expected_ll = expected_ll_gaussian(g1.covariance(), g2);
  add_exact(r, "expected_ll_lower", -*r.entropy - r.kl_bound, *r.expected_ll);

  // BB = sum_c E_c[exp(-(||psi||_p + alpha) distance)] and K~ = min_c E_c[K], by sampling.
  Rng rng(derive_seed(seed, 3));
  const std::size_t n = std::max<std::size_t>(mc_samples / 2, 100);
  r.k_tilde = std::numeric_limits<double>::infinity();
  for (const GaussianModel* g : {&g1, &g2}) {
    double e = 0.0;
    double ek = 0.0;
    Vec z(g->dim());
    for (std::size_t s = 0; s < n; ++s) {
      for (double& v : z) v = rng.normal();
      const double k = norm(m1.psi()(g->factor().solve_upper(z)), m1.p_norm()) + alpha;
      e += std::exp(-k * r.param_distance);
      ek += k;
    }
    r.bb += e / static_cast<double>(n);
    r.k_tilde = std::min(r.k_tilde, ek / static_cast<double>(n));
  }
  r.bayes_error_lower = 0.25 * r.bb;
  r.neg_log_be_upper = std::log(4.0) + r.k_tilde * r.param_distance;
  if (m1.weights() == m2.weights()) {
    r.bayes_error_exact = 0.5;
    add_exact(r, "be_lower", r.bayes_error_lower, 0.5);
  } else {
    r.bayes_error_mc = bayes_error_gaussian_mc(g1, g2, mc_samples, derive_seed(seed, 2));
    const double be = r.bayes_error_mc->estimate;
    const double se = r.bayes_error_mc->std_error;
    add_estimate(r, "be_lower", r.bayes_error_lower, be, se);
    add_estimate(r, "be_half", be, 0.5, se);
    add_estimate(r, "neg_log_be_upper", std::exp(-r.neg_log_be_upper), be, se);
  }
  return r;
}

std::string to_json(const BoundReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const BoundCheck& c : r.checks)
    checks.push_back({{"name", c.name},
                      {"lhs", c.lhs},
                      {"rhs", c.rhs},
                      {"std_error", c.std_error},
                      {"ok", c.ok},
                      {"kind", to_string(c.kind)}});
  nlohmann::json j = {
      {"kind", r.kind},
      {"p_norm", to_string(r.p_norm)},
      {"param_distance", r.param_distance},
      {"lipschitz_kbar", r.lipschitz_kbar},
      {"kl_exact", opt(r.kl_exact)},
      {"kl_bound", r.kl_bound},
      {"bayes_error_exact", opt(r.bayes_error_exact)},
      {"bayes_error_mc", opt(r.bayes_error_mc)},
      {"bb", r.bb},
      {"bayes_error_lower", r.bayes_error_lower},
      {"k_tilde", r.k_tilde},
      {"neg_log_be_upper", r.neg_log_be_upper},
      {"entropy", opt(r.entropy)},
      {"expected_ll", opt(r.expected_ll)},
      {"spectral_kl_bound", opt(r.spectral_kl_bound)},
      {"loose_kbar", opt(r.loose_kbar)},
      {"kbar_mc", opt(r.kbar_mc)},
      {"checks", checks},
      {"satisfied", r.satisfied()},
  };
  return j.dump(2);
}

std::string to_csv_row(const BoundReport& r) {
  std::string flags;
  for (const BoundCheck& c : r.checks) {
    if (!flags.empty()) flags += ';';
    flags += c.name + (c.ok ? "=ok" : "=fail");
  }
  const std::optional<double> be =
      r.bayes_error_exact ? r.bayes_error_exact
                          : (r.bayes_error_mc ? std::optional<double>(r.bayes_error_mc->estimate) : std::nullopt);
  return fmt::format("{},{},{},{},{},{},{},{}", num(r.param_distance), num(r.lipschitz_kbar), num(r.kl_exact),
                     num(r.kl_bound), num(be), num(r.bayes_error_lower), num(r.neg_log_be_upper), flags);
}

}  // namespace lipgm
