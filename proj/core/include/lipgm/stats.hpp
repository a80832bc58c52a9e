#pragma once

#include <optional>
#include <span>

#include "lipgm/numerics.hpp"

namespace lipgm {

/// Ranks starting at 1, ties receiving their average rank.
Vec average_ranks(std::span<const double> v);

/// Spearman rank correlation (Pearson correlation of average ranks). Empty
/// when fewer than two values or when either side is constant.
std::optional<double> spearman(std::span<const double> a, std::span<const double> b);

/// Median; the mean of the two middle values for even sizes.
double median(std::span<const double> v);

}  // namespace lipgm
