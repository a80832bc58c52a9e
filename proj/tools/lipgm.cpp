// lipgm: figure1, segment, bounds and generate subcommands.
//
// Exit status: 0 success, 1 runtime or fit failure, 2 input error,
// 3 violated bound.

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "lipgm/bound_report.hpp"
#include "lipgm/dataset_io.hpp"
#include "lipgm/errors.hpp"
#include "lipgm/experiments.hpp"
#include "lipgm/model_io.hpp"
#include "lipgm/rng.hpp"
#include "lipgm/synth.hpp"

namespace fs = std::filesystem;
using namespace lipgm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;
constexpr int kExitBound = 3;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotPositiveDefinite:
    case ErrorCode::NonConvergence:
    case ErrorCode::DegenerateData:
      return kExitRuntime;
    default:
      return kExitInput;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open '" + path.string() + "' for writing");
  out << text;
  if (!out.flush()) fail(ErrorCode::Io, "write to '" + path.string() + "' failed");
}

// results.csv -> results.<suffix>
fs::path sibling(const fs::path& p, const std::string& suffix) {
  fs::path s = p;
  s.replace_extension();
  s += "." + suffix;
  return s;
}

struct Figure1Args {
  std::string family = "ggm";
  Figure1Config cfg;
  fs::path out = "figure1.csv";
};

int cmd_figure1(const Figure1Args& a) {
  Figure1Config cfg = a.cfg;
  cfg.family = family_from_string(a.family);
  const Figure1Result r = run_figure1(cfg);
  write_text(a.out, figure1_csv(r));
  write_text(sibling(a.out, "summary.csv"), figure1_summary_csv(r));
  write_text(sibling(a.out, "meta.json"), figure1_meta_json(r));
  for (const Figure1Aggregate& g : aggregate_figure1(r))
    fmt::print("density={} median_spearman(kl,frob)={} median_spearman(kl,nll)={}\n", g.density,
               g.median_kl_frob ? fmt::format("{:.4f}", *g.median_kl_frob) : "undefined",
               g.median_kl_nll ? fmt::format("{:.4f}", *g.median_kl_nll) : "undefined");
  if (r.error) {
    fmt::print(stderr, "lipgm figure1: {}\n", *r.error);
    return kExitRuntime;
  }
  return kExitOk;
}

int cmd_segment(const SegmentConfig& cfg, const fs::path& out) {
  const SegmentReport r = run_segment(cfg);
  const std::string json = segment_json(cfg, r);
  if (out.empty())
    std::cout << json;
  else
    write_text(out, json);
  fmt::print(stderr, "purity={:.4f} windows={}\n", r.purity, r.n_windows);
  return kExitOk;
}

struct BoundsArgs {
  fs::path a;
  fs::path b;
  std::string p_norm = "l1";
  std::uint64_t seed = 0;
  std::size_t mc_samples = 100000;
  fs::path out;
  fs::path csv;
};

int cmd_bounds(const BoundsArgs& a) {
  const Norm p = norm_from_string(a.p_norm);
  const ModelDocument ma = load_model(a.a);
  const ModelDocument mb = load_model(a.b);
  const BoundReport r = run_bounds(ma, mb, p, a.seed, a.mc_samples);
  const std::string json = to_json(r) + "\n";
  if (a.out.empty())
    std::cout << json;
  else
    write_text(a.out, json);
  const std::string row = std::string(kBoundCsvHeader) + "\n" + to_csv_row(r) + "\n";
  if (!a.csv.empty()) write_text(a.csv, row);
  if (!r.satisfied()) {
    for (const BoundCheck& c : r.checks)
      if (!c.ok && c.kind != CheckKind::Stated)
        fmt::print(stderr, "lipgm bounds: violated {}: {:.17g} > {:.17g}\n", c.name, c.lhs, c.rhs);
    return kExitBound;
  }
  return kExitOk;
}

struct GenerateArgs {
  std::string family = "ggm";
  GenSpec spec;
  fs::path out = "model.json";
  std::size_t samples = 0;
  fs::path data;
};

int cmd_generate(const GenerateArgs& a) {
  const Family f = family_from_string(a.family);
  Dataset d;
  auto make_doc = [&](AnyModel m, std::string source) {
    return ModelDocument{std::move(m), Provenance{std::move(source), a.spec, {}}};
  };
  ModelDocument doc = [&] {
    if (f == Family::Ggm) {
      GaussianModel m = random_ggm(a.spec);
      if (a.samples > 0) d.values = sample_gaussian(m, a.samples, derive_seed(a.spec.seed, 1));
      return make_doc(std::move(m), "random_ggm");
    }
    DiscreteFactorGraph m = random_ising(a.spec);
    if (a.samples > 0) d.values = sample_ising_exact(m, a.samples, derive_seed(a.spec.seed, 1));
    return make_doc(std::move(m), "random_ising");
  }();
  save_model(a.out, doc);
  if (a.samples > 0) {
    d.names = default_column_names(a.spec.n_vars);
    const fs::path path = a.data.empty() ? sibling(a.out, "csv") : a.data;
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    write_csv(path, d, f == Family::Ising);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lipschitz-parametrized graphical models: experiments and bound reports"};
  app.require_subcommand(1);

  Figure1Args fig;
  fig.cfg.lambdas = {0.001, 0.01, 0.1, 1.0};
  auto* f1 = app.add_subcommand("figure1", "KL / test NLL / Frobenius along a regularization path");
  f1->add_option("--family", fig.family, "ggm or ising")->check(CLI::IsMember({"ggm", "ising"}));
  f1->add_option("--densities", fig.cfg.densities, "edge densities")->delimiter(',');
  f1->add_option("--reps", fig.cfg.reps, "repetitions per density")->check(CLI::PositiveNumber);
  f1->add_option("--lambdas", fig.cfg.lambdas, "regularization path")->delimiter(',');
  f1->add_option("--n-vars", fig.cfg.n_vars, "variables (default 50 for ggm, 10 for ising)");
  f1->add_option("--n-train", fig.cfg.n_train, "training rows");
  f1->add_option("--n-test", fig.cfg.n_test, "test rows");
  f1->add_option("--max-iter", fig.cfg.max_iter, "solver iteration budget");
  f1->add_option("--tol", fig.cfg.tol, "solver tolerance");
  f1->add_option("--threads", fig.cfg.threads, "worker threads")->check(CLI::PositiveNumber);
  f1->add_option("--seed", fig.cfg.seed, "master seed");
  f1->add_option("--out", fig.out, "results CSV (summary and meta files are written beside it)");

  SegmentConfig seg;
  fs::path seg_out;
  auto* sg = app.add_subcommand("segment", "cluster sliding windows of a synthetic regime sequence");
  sg->add_option("--k-regimes", seg.k_regimes, "number of regimes")->check(CLI::PositiveNumber);
  sg->add_option("--n-vars", seg.n_vars, "variables per regime");
  sg->add_option("--density", seg.density, "edge density of each regime");
  sg->add_option("--segment-len", seg.segment_len, "rows per regime block");
  sg->add_option("--window", seg.window, "window length in rows");
  sg->add_option("--stride", seg.stride, "window stride in rows")->check(CLI::PositiveNumber);
  sg->add_option("--lambda", seg.lambda, "Tikhonov regularization");
  sg->add_option("--components", seg.components, "PCA components");
  sg->add_option("--restarts", seg.kmeans_restarts, "k-means restarts");
  sg->add_option("--seed", seg.seed, "master seed");
  sg->add_option("--out", seg_out, "report JSON (stdout when omitted)");

  BoundsArgs bnd;
  auto* bd = app.add_subcommand("bounds", "divergence bounds between two serialized models");
  bd->add_option("model_a", bnd.a, "first model JSON (the reference P*)")->required();
  bd->add_option("model_b", bnd.b, "second model JSON")->required();
  bd->add_option("--p-norm", bnd.p_norm, "parameter distance for discrete models: l1, l2 or linf");
  bd->add_option("--seed", bnd.seed, "Monte Carlo seed");
  bd->add_option("--mc-samples", bnd.mc_samples, "Monte Carlo samples for Gaussian estimates");
  bd->add_option("--out", bnd.out, "report JSON (stdout when omitted)");
  bd->add_option("--csv", bnd.csv, "single-row CSV summary");

  GenerateArgs gen;
  auto* gn = app.add_subcommand("generate", "write a random model and optionally samples from it");
  gn->add_option("--family", gen.family, "ggm or ising")->check(CLI::IsMember({"ggm", "ising"}));
  gn->add_option("--n-vars", gen.spec.n_vars, "variables");
  gn->add_option("--density", gen.spec.density, "edge density");
  gn->add_option("--min-eig", gen.spec.min_eig, "smallest precision eigenvalue (ggm)");
  gn->add_option("--seed", gen.spec.seed, "generator seed");
  gn->add_option("--out", gen.out, "model JSON");
  gn->add_option("--samples", gen.samples, "rows to sample (0 = none)");
  gn->add_option("--data", gen.data, "sample CSV (default: beside the model)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    if (app.got_subcommand(f1)) return cmd_figure1(fig);
    if (app.got_subcommand(sg)) return cmd_segment(seg, seg_out);
    if (app.got_subcommand(bd)) return cmd_bounds(bnd);
    return cmd_generate(gen);
  } catch (const Error& e) {
    fmt::print(stderr, "lipgm: {}\n", e.what());
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    fmt::print(stderr, "lipgm: {}\n", e.what());
    return kExitRuntime;
  }
}
