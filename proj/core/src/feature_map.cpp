#include "lipgm/feature_map.hpp"

#include <cmath>
#include <string>

#include "lipgm/errors.hpp"

namespace lipgm {

std::string_view to_string(FeatureKind kind) noexcept {
  switch (kind) {
    case FeatureKind::Linear:
      return "linear";
    case FeatureKind::PairwiseProducts:
      return "pairwise";
    case FeatureKind::PairwiseWithField:
      return "pairwise_with_field";
    case FeatureKind::Quadratic:
      return "quadratic";
    case FeatureKind::LookupTable:
      return "lookup";
  }
  return "unknown";
}

FeatureKind feature_kind_from_string(std::string_view name) {
  for (FeatureKind k : {FeatureKind::Linear, FeatureKind::PairwiseProducts, FeatureKind::PairwiseWithField,
                        FeatureKind::Quadratic, FeatureKind::LookupTable})
    if (to_string(k) == name) return k;
  fail(ErrorCode::MalformedField, "unknown feature-map kind '" + std::string(name) + "'");
}

bool operator==(const FeatureBound& a, const FeatureBound& b) { return a.value == b.value && a.norm == b.norm; }

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) noexcept {
  // Pairs before row i: sum_{r<i} (n-1-r) = i*(2n-i-1)/2.
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

FeatureMap FeatureMap::linear(std::size_t input_dim) { return {FeatureKind::Linear, input_dim, input_dim}; }

FeatureMap FeatureMap::pairwise(std::size_t input_dim) {
  return {FeatureKind::PairwiseProducts, input_dim, input_dim * (input_dim - 1) / 2};
}

FeatureMap FeatureMap::pairwise_with_field(std::size_t input_dim) {
  return {FeatureKind::PairwiseWithField, input_dim, input_dim * (input_dim - 1) / 2 + input_dim};
}

FeatureMap FeatureMap::quadratic(std::size_t input_dim) {
  return {FeatureKind::Quadratic, input_dim, input_dim * (input_dim + 1) / 2};
}

FeatureMap FeatureMap::lookup(std::vector<std::size_t> cardinalities, std::vector<Vec> table) {
  std::size_t states = 1;
  for (std::size_t c : cardinalities) {
    require(c >= 1, ErrorCode::InvalidArgument, "lookup feature map: zero cardinality");
    states *= c;
  }
  require(table.size() == states, ErrorCode::DimensionMismatch,
          "lookup feature map: expected " + std::to_string(states) + " rows, got " + std::to_string(table.size()));
  const std::size_t out_dim = table.empty() ? 0 : table.front().size();
  for (const Vec& row : table)
    require(row.size() == out_dim, ErrorCode::DimensionMismatch, "lookup feature map: ragged table");
  FeatureMap m(FeatureKind::LookupTable, cardinalities.size(), out_dim);
  m.cardinalities_ = std::move(cardinalities);
  m.table_ = std::move(table);
  return m;
}

FeatureMap FeatureMap::with_bound(FeatureBound b) const {
  FeatureMap m = *this;
  m.bound_ = b;
  return m;
}

void FeatureMap::evaluate(std::span<const double> x, std::span<double> out) const {
  require(x.size() == input_dim_, ErrorCode::DimensionMismatch,
          "feature map: input length " + std::to_string(x.size()) + " != " + std::to_string(input_dim_));
  require(out.size() == output_dim_, ErrorCode::DimensionMismatch, "feature map: output length mismatch");
  const std::size_t n = input_dim_;
  switch (kind_) {
    case FeatureKind::Linear:
      std::copy(x.begin(), x.end(), out.begin());
      return;
    case FeatureKind::PairwiseProducts:
    case FeatureKind::PairwiseWithField: {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out[k++] = x[i] * x[j];
      if (kind_ == FeatureKind::PairwiseWithField)
        for (std::size_t i = 0; i < n; ++i) out[k++] = x[i];
      return;
    }
    case FeatureKind::Quadratic: {
      std::size_t k = 0;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out[k++] = x[i] * x[j];
      return;
    }
    case FeatureKind::LookupTable: {
      std::size_t index = 0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = x[i];
        const auto s = static_cast<long long>(std::llround(v));
        require(v == static_cast<double>(s) && s >= 0 && static_cast<std::size_t>(s) < cardinalities_[i],
                ErrorCode::IndexOutOfRange, "lookup feature map: input " + std::to_string(i) + " out of range");
        index = index * cardinalities_[i] + static_cast<std::size_t>(s);
      }
      std::copy(table_[index].begin(), table_[index].end(), out.begin());
      return;
    }
  }
}

Vec FeatureMap::operator()(std::span<const double> x) const {
  Vec out(output_dim_);
  evaluate(x, out);
  return out;
}

void FeatureMap::check_bound(std::span<const double> psi) const {
  if (!bound_) return;
  const double v = norm(psi, bound_->norm);
  if (v > bound_->value * (1.0 + 1e-12))
    fail(ErrorCode::FeatureBoundViolated,
         "feature norm " + std::to_string(v) + " exceeds declared bound " + std::to_string(bound_->value));
}

}  // namespace lipgm
