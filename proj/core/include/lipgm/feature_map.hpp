#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lipgm/numerics.hpp"

namespace lipgm {

enum class FeatureKind {
  Linear,             // psi(x) = x
  PairwiseProducts,   // x_i x_j for i < j
  PairwiseWithField,  // pairwise products followed by x
  Quadratic,          // x_i x_j for i <= j (upper triangle of x x^T, diagonal included)
  LookupTable,        // explicit vector per joint state of integer-coded inputs
};

std::string_view to_string(FeatureKind kind) noexcept;
FeatureKind feature_kind_from_string(std::string_view name);

struct FeatureBound {
  double value = 1.0;
  Norm norm = Norm::LInf;
};

/// Index of the pair (i, j), i < j, in the row-major upper-triangle ordering.
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept;

class FeatureMap {
 public:
  static FeatureMap linear(std::size_t input_dim);
  static FeatureMap pairwise(std::size_t input_dim);
  static FeatureMap pairwise_with_field(std::size_t input_dim);
  static FeatureMap quadratic(std::size_t input_dim);
  /// `table[s]` is psi for joint state s, with inputs coded 0..cardinality-1
  /// and the first input varying slowest.
  static FeatureMap lookup(std::vector<std::size_t> cardinalities, std::vector<Vec> table);

  FeatureKind kind() const noexcept { return kind_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  std::size_t output_dim() const noexcept { return output_dim_; }
  const std::optional<FeatureBound>& declared_bound() const noexcept { return bound_; }
  const std::vector<std::size_t>& cardinalities() const noexcept { return cardinalities_; }
  const std::vector<Vec>& table() const noexcept { return table_; }

  FeatureMap with_bound(FeatureBound b) const;

  Vec operator()(std::span<const double> x) const;
  void evaluate(std::span<const double> x, std::span<double> out) const;

  /// Throws FeatureBoundViolated when psi exceeds the declared bound.
  void check_bound(std::span<const double> psi) const;

  friend bool operator==(const FeatureMap&, const FeatureMap&) = default;

 private:
  FeatureMap(FeatureKind kind, std::size_t input_dim, std::size_t output_dim)
      : kind_(kind), input_dim_(input_dim), output_dim_(output_dim) {}

  FeatureKind kind_;
  std::size_t input_dim_;
  std::size_t output_dim_;
  std::optional<FeatureBound> bound_;
  std::vector<std::size_t> cardinalities_;
  std::vector<Vec> table_;
};

bool operator==(const FeatureBound& a, const FeatureBound& b);

}  // namespace lipgm
