#include "lipgm/state_space.hpp"

#include <cstdlib>
#include <limits>
#include <string>

#include "lipgm/config.hpp"
#include "lipgm/errors.hpp"

namespace lipgm {

std::size_t enumeration_cap() {
  if (const char* env = std::getenv("LIPGM_ENUM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultEnumerationCap;
}

StateSpace::StateSpace(std::vector<Vec> domains) : domains_(std::move(domains)) {
  size_ = 1;
  for (const Vec& d : domains_) {
    require(!d.empty(), ErrorCode::InvalidArgument, "StateSpace: empty domain");
    if (size_ > std::numeric_limits<std::size_t>::max() / d.size())
      size_ = std::numeric_limits<std::size_t>::max();
    else
      size_ *= d.size();
  }
}

StateSpace StateSpace::ising(std::size_t n) { return StateSpace(std::vector<Vec>(n, Vec{-1.0, 1.0})); }

StateSpace StateSpace::integer(std::vector<std::size_t> cardinalities) {
  std::vector<Vec> domains;
  domains.reserve(cardinalities.size());
  for (std::size_t c : cardinalities) {
    Vec d(c);
    for (std::size_t v = 0; v < c; ++v) d[v] = static_cast<double>(v);
    domains.push_back(std::move(d));
  }
  return StateSpace(std::move(domains));
}

std::vector<std::size_t> StateSpace::cardinalities() const {
  std::vector<std::size_t> out;
  out.reserve(domains_.size());
  for (const Vec& d : domains_) out.push_back(d.size());
  return out;
}

void StateSpace::require_enumerable(std::size_t cap) const {
  if (size_ > cap)
    fail(ErrorCode::EnumerationCapExceeded,
         "state space of " + std::to_string(num_vars()) + " variables exceeds the enumeration cap " +
             std::to_string(cap));
}

void StateSpace::decode(std::size_t index, std::span<double> values) const {
  require(values.size() == domains_.size(), ErrorCode::DimensionMismatch, "StateSpace::decode: wrong length");
  for (std::size_t i = domains_.size(); i-- > 0;) {
    const std::size_t card = domains_[i].size();
    values[i] = domains_[i][index % card];
    index /= card;
  }
}

Vec StateSpace::decode(std::size_t index) const {
  Vec v(domains_.size());
  decode(index, v);
  return v;
}

std::size_t StateSpace::encode(std::span<const double> values) const {
  require(values.size() == domains_.size(), ErrorCode::DimensionMismatch,
          "StateSpace::encode: expected " + std::to_string(domains_.size()) + " values");
  std::size_t index = 0;
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const Vec& d = domains_[i];
    std::size_t pos = d.size();
    for (std::size_t k = 0; k < d.size(); ++k)
      if (d[k] == values[i]) {
        pos = k;
        break;
      }
    require(pos < d.size(), ErrorCode::IndexOutOfRange,
            "StateSpace::encode: value " + std::to_string(values[i]) + " not in domain of variable " +
                std::to_string(i));
    index = index * d.size() + pos;
  }
  return index;
}

}  // namespace lipgm
