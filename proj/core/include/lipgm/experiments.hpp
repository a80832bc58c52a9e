#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lipgm/bound_report.hpp"
#include "lipgm/model_io.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

enum class Family { Ggm, Ising };

std::string_view to_string(Family f) noexcept;
/// "ggm" or "ising"; throws InvalidArgument otherwise.
Family family_from_string(std::string_view s);

struct Figure1Config {
  Family family = Family::Ggm;
  std::vector<double> densities{0.2, 0.5, 0.8};
  std::size_t reps = 50;
  std::vector<double> lambdas{0.001, 0.01, 0.1, 1.0};
  std::size_t n_vars = 0;  // 0: 50 for ggm, 10 for ising
  std::size_t n_train = 50;
  std::size_t n_test = 50;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  int max_iter = 10000;
  double tol = 1e-6;
};

struct Figure1Row {
  Family family = Family::Ggm;
  double density = 0.0;
  std::size_t repetition = 0;
  double lambda = 0.0;
  double kl = 0.0;           // KL(P* || P_hat)
  double neg_test_ll = 0.0;  // mean over test rows
  double frob = 0.0;         // ||Theta_hat - Theta*||_F
  bool converged = false;
  int iterations = 0;
};

struct Figure1Summary {
  double density = 0.0;
  std::size_t repetition = 0;
  std::optional<double> rho_kl_frob;
  std::optional<double> rho_kl_nll;
  std::optional<double> rho_frob_nll;
};

struct Figure1Result {
  Figure1Config config;
  std::vector<Figure1Row> rows;         // sorted by (density, repetition, lambda)
  std::vector<Figure1Summary> summary;  // per (density, repetition)
  std::optional<std::string> error;     // first fit failure; rows hold what finished
};

/// Repetition r at density index d uses the stream derive_seed(derive_seed(seed, d), r),
/// so results do not depend on the number of threads.
Figure1Result run_figure1(const Figure1Config& cfg);

/// Median over repetitions of a summary column, per density. Repetitions
/// where the correlation is undefined are skipped.
struct Figure1Aggregate {
  double density = 0.0;
  std::optional<double> median_kl_frob;
  std::optional<double> median_kl_nll;
  std::size_t defined = 0;
};
std::vector<Figure1Aggregate> aggregate_figure1(const Figure1Result& r);

inline constexpr std::string_view kFigure1CsvHeader =
    "family,density,repetition,lambda,kl,neg_test_ll,frob,converged,iterations";
inline constexpr std::string_view kFigure1SummaryCsvHeader =
    "family,density,repetition,spearman_kl_frob,spearman_kl_nll,spearman_frob_nll";

std::string figure1_csv(const Figure1Result& r);
std::string figure1_summary_csv(const Figure1Result& r);
std::string figure1_meta_json(const Figure1Result& r);

struct SegmentConfig {
  std::size_t k_regimes = 4;
  std::size_t n_vars = 10;
  double density = 0.5;  // of each regime's random precision matrix
  std::size_t segment_len = 400;
  std::size_t window = 60;
  std::size_t stride = 10;
  double lambda = 0.1;
  std::size_t components = 3;
  std::size_t kmeans_restarts = 10;
  std::uint64_t seed = 0;
};

struct SegmentReport {
  double purity = 0.0;
  std::size_t n_windows = 0;
  std::vector<std::size_t> truth;      // per window, label of its center row
  std::vector<std::size_t> predicted;  // per window, k-means cluster
  /// confusion[t][c]: percentage of windows with true label t in cluster c;
  /// clusters ordered by the label they hold most of, ties broken by index.
  std::vector<std::vector<double>> confusion;
  std::vector<std::size_t> cluster_order;
  double inertia = 0.0;
};

/// Windows of a regime sequence, each summarized by its Tikhonov precision
/// (upper triangle with diagonal), projected to `components` principal
/// components and clustered with k = k_regimes. Throws DegenerateData when
/// the window features have rank below `components`.
SegmentReport run_segment(const SegmentConfig& cfg);
/// The same pipeline on given regime generators; k_regimes, n_vars and
/// density in cfg are ignored.
SegmentReport run_segment(const SegmentConfig& cfg, const std::vector<GaussianModel>& models);

/// Fraction of points whose cluster's majority label equals their own.
double cluster_purity(const std::vector<std::size_t>& truth, const std::vector<std::size_t>& clusters);

std::string segment_json(const SegmentConfig& cfg, const SegmentReport& r);

/// Bound report for two model documents of the same kind; StructureMismatch
/// otherwise. p is the distance norm for discrete factor graphs.
BoundReport run_bounds(const ModelDocument& a, const ModelDocument& b, Norm p, std::uint64_t seed,
                       std::size_t mc_samples = 100000);

}  // namespace lipgm
