#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lipgm/numerics.hpp"

namespace lipgm {

/// Finite product space. Each variable takes values from its own domain;
/// joint states are indexed in mixed radix with the first variable slowest.
class StateSpace {
 public:
  StateSpace() = default;
  explicit StateSpace(std::vector<Vec> domains);

  /// n variables with values {-1, +1}.
  static StateSpace ising(std::size_t n);
  /// Integer-coded variables with values 0..card-1.
  static StateSpace integer(std::vector<std::size_t> cardinalities);

  std::size_t num_vars() const noexcept { return domains_.size(); }
  const std::vector<Vec>& domains() const noexcept { return domains_; }
  std::vector<std::size_t> cardinalities() const;

  /// Joint state count; saturates at SIZE_MAX on overflow.
  std::size_t size() const noexcept { return size_; }
  /// Throws EnumerationCapExceeded when size() > cap.
  void require_enumerable(std::size_t cap) const;

  void decode(std::size_t index, std::span<double> values) const;
  Vec decode(std::size_t index) const;
  /// Throws IndexOutOfRange when some value is not in its domain.
  std::size_t encode(std::span<const double> values) const;

  friend bool operator==(const StateSpace& a, const StateSpace& b) { return a.domains_ == b.domains_; }

 private:
  std::vector<Vec> domains_;
  std::size_t size_ = 1;
};

}  // namespace lipgm
