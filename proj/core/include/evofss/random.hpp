#pragma once

#include <cmath>
#include <cstdint>

namespace evofss {

// Purpose tags keep streams derived for different phases of a run disjoint.
enum class StreamPurpose : std::uint64_t {
  Init = 1,
  Split = 2,
  DeVariation = 3,
  TaVariation = 4,
  Generic = 5,
};

// Deterministic counter-based random stream (splitmix64 core).
//
// A stream is derived from a key tuple (master seed, purpose, up to three
// indices such as run / iteration / individual id). Identical tuples yield
// identical draw sequences no matter which thread asks or in what order,
// which is what makes parallel runs bit-reproducible.
class RandomStream {
 public:
  RandomStream() = default;
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  static RandomStream derive(std::uint64_t master, StreamPurpose purpose,
                             std::uint64_t a = 0, std::uint64_t b = 0,
                             std::uint64_t c = 0) {
    std::uint64_t h = mix(master, static_cast<std::uint64_t>(purpose));
    h = mix(h, a);
    h = mix(h, b);
    h = mix(h, c);
    return RandomStream(h);
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in [0,n), rejection sampled so the distribution is exact.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double next_gaussian() {
    double u1 = next_double();
    double u2 = next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h += 0x9e3779b97f4a7c15ull + v;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ull;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebull;
    return h ^ (h >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace evofss
