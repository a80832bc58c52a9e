#include "lipgm/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lipgm/errors.hpp"
#include "lipgm/rng.hpp"

namespace lipgm {

namespace {

void require_spec(const GenSpec& spec) {
  require(spec.n_vars >= 1, ErrorCode::InvalidArgument, "GenSpec: n_vars must be >= 1");
  require(spec.density >= 0.0 && spec.density <= 1.0, ErrorCode::InvalidArgument,
          "GenSpec: density must lie in [0, 1]");
}

// Pairs in pair_index() order; each pair draws its Bernoulli and, when kept,
// its weight, so the stream layout does not depend on the density.
Vec random_edge_weights(const GenSpec& spec, Rng& rng) {
  const std::size_t n = spec.n_vars;
  Vec w(n * (n - 1) / 2, 0.0);
  for (double& v : w) {
    const bool keep = rng.bernoulli(spec.density);
    const double u = rng.uniform(-1.0, 1.0);
    if (keep) v = u;
  }
  return w;
}

}  // namespace

GaussianModel random_ggm(const GenSpec& spec) {
  require_spec(spec);
  require(spec.min_eig > 0.0, ErrorCode::InvalidArgument, "random_ggm: min_eig must be > 0");
  Rng rng(spec.seed);
  const std::size_t n = spec.n_vars;
  const Vec w = random_edge_weights(spec, rng);
  SymMatrix omega = SymMatrix::identity(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) omega.set(i, j, w[pair_index(i, j, n)]);
  const EigenExtremes e = extreme_eigs(omega);
  if (e.min < spec.min_eig) {
    const double shift = spec.min_eig - e.min + 1e-6;
    for (std::size_t i = 0; i < n; ++i) omega.add(i, i, shift);
  }
  return GaussianModel::with_tight_bounds(std::move(omega));
}

DiscreteFactorGraph random_ising(const GenSpec& spec) {
  require_spec(spec);
  Rng rng(spec.seed);
  return DiscreteFactorGraph::ising(spec.n_vars, random_edge_weights(spec, rng));
}

Matrix sample_gaussian(const GaussianModel& m, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::InvalidArgument, "sample_gaussian: n must be >= 1");
  Rng rng(seed);
  Matrix out(n, m.dim());
  Vec z(m.dim());
  for (std::size_t r = 0; r < n; ++r) {
    for (double& v : z) v = rng.normal();
    const Vec x = m.factor().solve_upper(z);
    std::copy(x.begin(), x.end(), out.row(r).begin());
  }
  return out;
}

Matrix sample_ising_exact(const DiscreteFactorGraph& m, std::size_t n, std::uint64_t seed) {
  require(n >= 1, ErrorCode::InvalidArgument, "sample_ising_exact: n must be >= 1");
  Vec cdf(m.num_states());
  double acc = 0.0;
  for (std::size_t s = 0; s < cdf.size(); ++s) {
    acc += std::exp(m.log_prob(s));
    cdf[s] = acc;
  }
  Rng rng(seed);
  Matrix out(n, m.num_vars());
  for (std::size_t r = 0; r < n; ++r) {
    const double u = rng.uniform() * acc;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const std::size_t s = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
    m.space().decode(s, out.row(r));
  }
  return out;
}

RegimeSequence regime_sequence(const std::vector<GaussianModel>& models, std::size_t segment_len,
                               std::uint64_t seed) {
  require(!models.empty(), ErrorCode::InvalidArgument, "regime_sequence: no models");
  require(segment_len >= 1, ErrorCode::InvalidArgument, "regime_sequence: segment_len must be >= 1");
  const std::size_t d = models.front().dim();
  for (const GaussianModel& m : models)
    require(m.dim() == d, ErrorCode::DimensionMismatch, "regime_sequence: models differ in dimension");
  RegimeSequence out{Matrix(models.size() * segment_len, d), {}};
  out.labels.reserve(models.size() * segment_len);
  for (std::size_t c = 0; c < models.size(); ++c) {
    const Matrix block = sample_gaussian(models[c], segment_len, derive_seed(seed, c));
    for (std::size_t r = 0; r < segment_len; ++r) {
      std::copy(block.row(r).begin(), block.row(r).end(), out.data.row(c * segment_len + r).begin());
      out.labels.push_back(c);
    }
  }
  return out;
}

std::vector<Matrix> sliding_windows(const Matrix& data, std::size_t window, std::size_t stride) {
  require(window >= 1 && stride >= 1, ErrorCode::InvalidArgument, "sliding_windows: window and stride must be >= 1");
  if (window > data.rows())
    fail(ErrorCode::WindowTooLarge,
         "sliding_windows: window " + std::to_string(window) + " exceeds " + std::to_string(data.rows()) + " rows");
  const std::size_t count = (data.rows() - window) / stride + 1;
  std::vector<Matrix> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(data.slice_rows(k * stride, window));
  return out;
}

}  // namespace lipgm
