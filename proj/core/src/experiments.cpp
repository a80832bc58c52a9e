#include "lipgm/experiments.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <json.hpp>
#include <mutex>
#include <numeric>
#include <thread>
#include <tuple>

#include "lipgm/clustering.hpp"
#include "lipgm/divergence.hpp"
#include "lipgm/errors.hpp"
#include "lipgm/learn.hpp"
#include "lipgm/rng.hpp"
#include "lipgm/stats.hpp"
#include "lipgm/synth.hpp"

namespace lipgm {

std::string_view to_string(Family f) noexcept { return f == Family::Ggm ? "ggm" : "ising"; }

Family family_from_string(std::string_view s) {
  if (s == "ggm") return Family::Ggm;
  if (s == "ising") return Family::Ising;
  fail(ErrorCode::InvalidArgument, "unknown family '" + std::string(s) + "' (expected ggm or ising)");
}

namespace {

std::string num(double v) { return fmt::format("{:.17g}", v); }
std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

std::vector<Figure1Row> run_repetition(const Figure1Config& cfg, std::size_t d, std::size_t rep) {
  const std::uint64_t stream = derive_seed(derive_seed(cfg.seed, d), rep);
  const double density = cfg.densities[d];
  const std::size_t n = cfg.n_vars;
  const GenSpec spec{n, density, 0.1, derive_seed(stream, 0)};
  std::vector<Figure1Row> rows;
  rows.reserve(cfg.lambdas.size());

  if (cfg.family == Family::Ggm) {
    const GaussianModel truth = random_ggm(spec);
    const Matrix train = sample_gaussian(truth, cfg.n_train, derive_seed(stream, 1));
    const Matrix test = sample_gaussian(truth, cfg.n_test, derive_seed(stream, 2));
    const SymMatrix s = empirical_covariance(train);
    for (double lambda : cfg.lambdas) {
      const GlassoFit fit = graphical_lasso(s, {lambda, cfg.max_iter, cfg.tol, stream});
      rows.push_back({cfg.family, density, rep, lambda, kl_gaussian(truth, fit.model),
                      -gaussian_test_ll(fit.model, test), (fit.model.omega() - truth.omega()).frobenius(),
                      fit.converged, fit.iterations});
    }
  } else {
    const DiscreteFactorGraph truth = random_ising(spec);
    const Matrix train = sample_ising_exact(truth, cfg.n_train, derive_seed(stream, 1));
    const Matrix test = sample_ising_exact(truth, cfg.n_test, derive_seed(stream, 2));
    for (double lambda : cfg.lambdas) {
      const IsingFit fit = ising_pseudolikelihood(train, {lambda, cfg.max_iter, cfg.tol, stream});
      rows.push_back({cfg.family, density, rep, lambda, kl_discrete_exact(truth, fit.model),
                      -ising_test_ll(fit.model, test), norm2(subtract(fit.model.weights(), truth.weights())),
                      fit.converged, fit.iterations});
    }
  }
  return rows;
}

}  // namespace

Figure1Result run_figure1(const Figure1Config& in) {
  Figure1Config cfg = in;
  if (cfg.n_vars == 0) cfg.n_vars = cfg.family == Family::Ggm ? 50 : 10;
  require(!cfg.densities.empty() && !cfg.lambdas.empty() && cfg.reps >= 1, ErrorCode::InvalidArgument,
          "figure1: densities, lambdas and reps must be non-empty");
  require(cfg.n_vars >= 2, ErrorCode::InvalidArgument, "figure1: need at least 2 variables");
  require(cfg.n_train >= 2 && cfg.n_test >= 1, ErrorCode::TooFewSamples, "figure1: need >= 2 train and >= 1 test rows");
  for (double l : cfg.lambdas)
    require(l > 0.0, ErrorCode::InvalidArgument, "figure1: lambdas must be > 0");

  const std::size_t tasks = cfg.densities.size() * cfg.reps;
  std::vector<std::vector<Figure1Row>> results(tasks);
  std::vector<std::optional<std::string>> errors(tasks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t t = next++; t < tasks; t = next++) {
      try {
        results[t] = run_repetition(cfg, t / cfg.reps, t % cfg.reps);
      } catch (const std::exception& e) {
        errors[t] = fmt::format("density={} repetition={}: {}", cfg.densities[t / cfg.reps], t % cfg.reps, e.what());
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(tasks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  Figure1Result out;
  out.config = cfg;
  for (std::size_t t = 0; t < tasks; ++t) {
    if (errors[t] && !out.error) out.error = errors[t];
    if (errors[t]) continue;
    const auto& rows = results[t];
    out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    Vec kl;
    Vec fr;
    Vec nll;
    for (const Figure1Row& r : rows) {
      kl.push_back(r.kl);
      fr.push_back(r.frob);
      nll.push_back(r.neg_test_ll);
    }
    out.summary.push_back({cfg.densities[t / cfg.reps], t % cfg.reps, spearman(kl, fr), spearman(kl, nll),
                           spearman(fr, nll)});
  }
  std::stable_sort(out.rows.begin(), out.rows.end(), [](const Figure1Row& a, const Figure1Row& b) {
    return std::tie(a.density, a.repetition, a.lambda) < std::tie(b.density, b.repetition, b.lambda);
  });
  std::stable_sort(out.summary.begin(), out.summary.end(), [](const Figure1Summary& a, const Figure1Summary& b) {
    return std::tie(a.density, a.repetition) < std::tie(b.density, b.repetition);
  });
  return out;
}

std::vector<Figure1Aggregate> aggregate_figure1(const Figure1Result& r) {
  std::vector<Figure1Aggregate> out;
  for (double d : r.config.densities) {
    Vec a;
    Vec b;
    for (const Figure1Summary& s : r.summary) {
      if (s.density != d) continue;
      if (s.rho_kl_frob) a.push_back(*s.rho_kl_frob);
      if (s.rho_kl_nll) b.push_back(*s.rho_kl_nll);
    }
    Figure1Aggregate g;
    g.density = d;
    if (!a.empty()) g.median_kl_frob = median(a);
    if (!b.empty()) g.median_kl_nll = median(b);
    g.defined = std::min(a.size(), b.size());
    out.push_back(g);
  }
  return out;
}

std::string figure1_csv(const Figure1Result& r) {
  std::string s(kFigure1CsvHeader);
  s += '\n';
  for (const Figure1Row& row : r.rows)
    s += fmt::format("{},{},{},{},{},{},{},{},{}\n", to_string(row.family), num(row.density), row.repetition,
                     num(row.lambda), num(row.kl), num(row.neg_test_ll), num(row.frob), row.converged ? 1 : 0,
                     row.iterations);
  if (r.error) s += fmt::format("error,,,,,,,,\"{}\"\n", *r.error);
  return s;
}

std::string figure1_summary_csv(const Figure1Result& r) {
  std::string s(kFigure1SummaryCsvHeader);
  s += '\n';
  for (const Figure1Summary& row : r.summary)
    s += fmt::format("{},{},{},{},{},{}\n", to_string(r.config.family), num(row.density), row.repetition,
                     num(row.rho_kl_frob), num(row.rho_kl_nll), num(row.rho_frob_nll));
  return s;
}

std::string figure1_meta_json(const Figure1Result& r) {
  const Figure1Config& c = r.config;
  nlohmann::json agg = nlohmann::json::array();
  for (const Figure1Aggregate& g : aggregate_figure1(r))
    agg.push_back({{"density", g.density},
                   {"median_spearman_kl_frob", g.median_kl_frob ? nlohmann::json(*g.median_kl_frob) : nullptr},
                   {"median_spearman_kl_nll", g.median_kl_nll ? nlohmann::json(*g.median_kl_nll) : nullptr},
                   {"repetitions_defined", g.defined}});
  std::size_t unconverged = 0;
  for (const Figure1Row& row : r.rows) unconverged += row.converged ? 0 : 1;
  nlohmann::json j = {
      {"family", to_string(c.family)},
      {"n_vars", c.n_vars},
      {"densities", c.densities},
      {"repetitions", c.reps},
      {"lambdas", c.lambdas},
      {"n_train", c.n_train},
      {"n_test", c.n_test},
      {"seed", c.seed},
      {"max_iter", c.max_iter},
      {"tol", c.tol},
      {"x_axis", "regularization path over lambda (a reconstruction: the original figure does not name its axis)"},
      {"estimator", c.family == Family::Ggm ? "graphical lasso, off-diagonal l1 penalty"
                                            : "l1-penalized pseudolikelihood, symmetric couplings"},
      {"ground_truth", c.family == Family::Ggm
                           ? "unit diagonal, Uniform[-1,1] edges, lambda_min repaired to >= 0.1"
                           : "Uniform[-1,1] couplings, no field"},
      {"frob", c.family == Family::Ggm ? "full precision matrix" : "coupling vector"},
      {"unconverged_fits", unconverged},
      {"aggregate", agg},
      {"error", r.error ? nlohmann::json(*r.error) : nullptr},
  };
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------- segmentation

double cluster_purity(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& clusters) {
  require(truth.size() == clusters.size() && !truth.empty(), ErrorCode::DimensionMismatch,
          "cluster_purity: label vectors must be non-empty and of equal length");
  const std::size_t nt = *std::max_element(truth.begin(), truth.end()) + 1;
  const std::size_t nc = *std::max_element(clusters.begin(), clusters.end()) + 1;
  std::vector<std::vector<std::size_t>> counts(nc, std::vector<std::size_t>(nt, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) ++counts[clusters[i]][truth[i]];
  std::size_t hits = 0;
  for (const auto& row : counts) hits += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hits) / static_cast<double>(truth.size());
}

SegmentReport run_segment(const SegmentConfig& cfg) {
  require(cfg.k_regimes >= 1, ErrorCode::InvalidArgument, "segment: k_regimes must be >= 1");
  std::vector<GaussianModel> models;
  for (std::size_t c = 0; c < cfg.k_regimes; ++c)
    models.push_back(random_ggm({cfg.n_vars, cfg.density, 0.1, derive_seed(cfg.seed, c)}));
  return run_segment(cfg, models);
}

SegmentReport run_segment(const SegmentConfig& cfg, const std::vector<GaussianModel>& models) {
  require(!models.empty(), ErrorCode::InvalidArgument, "segment: need at least one regime");
  require(cfg.kmeans_restarts >= 1, ErrorCode::InvalidArgument, "segment: kmeans_restarts must be >= 1");
  const std::size_t k = models.size();
  const std::size_t n_vars = models.front().dim();
  const RegimeSequence seq = regime_sequence(models, cfg.segment_len, derive_seed(cfg.seed, 1000));
  const std::vector<Matrix> windows = sliding_windows(seq.data, cfg.window, cfg.stride);

  SegmentReport out;
  out.n_windows = windows.size();
  const std::size_t f = n_vars * (n_vars + 1) / 2;
  Matrix features(windows.size(), f);
  for (std::size_t w = 0; w < windows.size(); ++w) {
    const TikhonovFit fit = tikhonov(empirical_covariance(windows[w]), cfg.lambda);
    const Vec v = fit.model.omega().upper_with_diag();
    std::copy(v.begin(), v.end(), features.row(w).begin());
    out.truth.push_back(seq.labels[w * cfg.stride + cfg.window / 2]);
  }

  if (k == 1) {
    out.predicted.assign(windows.size(), 0);
  } else {
    require(windows.size() >= k, ErrorCode::DegenerateData, "segment: fewer windows than regimes");
    const std::size_t comps = std::min(cfg.components, f);
    const PcaResult p = pca(features, comps);
    if (p.degenerate)
      fail(ErrorCode::DegenerateData, "segment: window features have rank below " + std::to_string(comps));
    std::optional<KMeansResult> best;
    for (std::size_t r = 0; r < cfg.kmeans_restarts; ++r) {
      KMeansResult km = kmeans(p.scores, k, derive_seed(cfg.seed, 2000 + r));
      if (!best || km.inertia < best->inertia) best = std::move(km);
    }
    out.predicted = best->labels;
    out.inertia = best->inertia;
  }
  out.purity = cluster_purity(out.truth, out.predicted);

  // Greedy matching of clusters to labels by co-occurrence count.
  std::vector<std::vector<std::size_t>> counts(k, std::vector<std::size_t>(k, 0));
  for (std::size_t i = 0; i < out.truth.size(); ++i) ++counts[out.truth[i]][out.predicted[i]];
  std::vector<std::tuple<std::size_t, std::size_t, std::size_t>> cells;
  for (std::size_t t = 0; t < k; ++t)
    for (std::size_t c = 0; c < k; ++c) cells.emplace_back(counts[t][c], t, c);
  std::stable_sort(cells.begin(), cells.end(), [](const auto& a, const auto& b) { return std::get<0>(a) > std::get<0>(b); });
  out.cluster_order.assign(k, k);
  std::vector<bool> used(k, false);
  for (const auto& [cnt, t, c] : cells) {
    if (out.cluster_order[t] != k || used[c]) continue;
    out.cluster_order[t] = c;
    used[c] = true;
  }
  out.confusion.assign(k, std::vector<double>(k, 0.0));
  for (std::size_t t = 0; t < k; ++t) {
    const double total = static_cast<double>(std::accumulate(counts[t].begin(), counts[t].end(), std::size_t{0}));
    for (std::size_t j = 0; j < k; ++j)
      out.confusion[t][j] = total > 0.0 ? 100.0 * static_cast<double>(counts[t][out.cluster_order[j]]) / total : 0.0;
  }
  return out;
}

std::string segment_json(const SegmentConfig& cfg, const SegmentReport& r) {
  nlohmann::json j = {
      {"config",
       {{"k_regimes", cfg.k_regimes},
        {"n_vars", cfg.n_vars},
        {"density", cfg.density},
        {"segment_len", cfg.segment_len},
        {"window", cfg.window},
        {"stride", cfg.stride},
        {"lambda", cfg.lambda},
        {"components", cfg.components},
        {"kmeans_restarts", cfg.kmeans_restarts},
        {"seed", cfg.seed}}},
      {"purity", r.purity},
      {"n_windows", r.n_windows},
      {"inertia", r.inertia},
      {"confusion_percent", r.confusion},
      {"cluster_order", r.cluster_order},
      {"window_label", "label of the center row"},
  };
  return j.dump(2) + "\n";
}

// ----------------------------------------------------------------- bounds

BoundReport run_bounds(const ModelDocument& a, const ModelDocument& b, Norm p, std::uint64_t seed,
                       std::size_t mc_samples) {
  if (a.model.index() != b.model.index())
    fail(ErrorCode::StructureMismatch, "bounds: model kinds differ ('" + std::string(model_kind(a.model)) + "' vs '" +
                                           std::string(model_kind(b.model)) + "')");
  if (const auto* g = std::get_if<GaussianModel>(&a.model))
    return bound_report(*g, std::get<GaussianModel>(b.model), seed, mc_samples);
  if (const auto* d = std::get_if<DiscreteFactorGraph>(&a.model))
    return bound_report(*d, std::get<DiscreteFactorGraph>(b.model), p);
  return bound_report(std::get<ContinuousFactorGraph>(a.model), std::get<ContinuousFactorGraph>(b.model), seed,
                      mc_samples);
}

}  // namespace lipgm
