#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <vector>

#include "evofss/random.hpp"

namespace evofss {

// Binary feature subset: bit i is 1 iff feature i is selected.
struct FeatureMask {
  std::vector<std::uint8_t> bits;

  FeatureMask() = default;
  explicit FeatureMask(std::size_t nfeat) : bits(nfeat, 0) {}

  std::size_t size() const { return bits.size(); }

  std::size_t cardinality() const {
    return std::accumulate(bits.begin(), bits.end(), std::size_t{0},
                           [](std::size_t acc, std::uint8_t b) {
                             return acc + (b != 0 ? 1 : 0);
                           });
  }

  bool empty_subset() const { return cardinality() == 0; }

  bool operator==(const FeatureMask& other) const = default;
};

// All-zero masks have no defined fitness; set one uniformly chosen bit.
inline void repair_empty_mask(FeatureMask& mask, RandomStream& stream) {
  if (mask.bits.empty() || !mask.empty_subset()) return;
  mask.bits[static_cast<std::size_t>(stream.next_below(mask.bits.size()))] = 1;
}

}  // namespace evofss
