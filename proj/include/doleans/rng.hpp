#pragma once

#include <cstdint>

namespace doleans {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent random stream keyed by (seed, stream index).
///
/// A Weyl-sequence generator in the style of SplittableRandom: the starting
/// state and the odd increment are both derived from the key by nonlinear
/// mixing, so streams with neighbouring indices do not overlap.
class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();

  /// Uniform double strictly inside (0, 1), 53 bits of resolution.
  double next_open_unit();

 private:
  std::uint64_t state_;
  std::uint64_t gamma_;
};

}  // namespace doleans
