#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lipgm/factor_graph.hpp"
#include "lipgm/gaussian_model.hpp"
#include "lipgm/numerics.hpp"

namespace lipgm {

struct GenSpec {
  std::size_t n_vars = 10;
  double density = 0.5;
  double min_eig = 0.1;  // Gaussian only
  std::uint64_t seed = 0;
};

/// Unit diagonal plus Uniform[-1, 1] weights on edges kept independently with
/// probability `density`. When lambda_min < min_eig the diagonal is shifted by
/// min_eig - lambda_min + 1e-6. alpha and beta are the final extreme eigenvalues.
GaussianModel random_ggm(const GenSpec& spec);

/// Ising model without field; couplings drawn like the Gaussian edge weights.
DiscreteFactorGraph random_ising(const GenSpec& spec);

/// Rows x = L^{-T} z with Omega = L L^T and z standard normal.
Matrix sample_gaussian(const GaussianModel& m, std::size_t n, std::uint64_t seed);

/// I.i.d. draws by inverting the cumulative distribution over state indices.
Matrix sample_ising_exact(const DiscreteFactorGraph& m, std::size_t n, std::uint64_t seed);

struct RegimeSequence {
  Matrix data;
  std::vector<std::size_t> labels;  // generating model of each row
};

/// One block of segment_len rows per model, in order. Block c uses the
/// stream derive_seed(seed, c).
RegimeSequence regime_sequence(const std::vector<GaussianModel>& models, std::size_t segment_len,
                               std::uint64_t seed);

/// Windows of `window` rows starting at 0, stride, 2 stride, ...; there are
/// floor((rows - window) / stride) + 1 of them. Throws WindowTooLarge.
std::vector<Matrix> sliding_windows(const Matrix& data, std::size_t window, std::size_t stride);

}  // namespace lipgm
