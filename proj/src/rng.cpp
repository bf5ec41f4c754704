#include "doleans/rng.hpp"

namespace doleans {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

StreamRng::StreamRng(std::uint64_t seed, std::uint64_t stream) {
  const std::uint64_t key = mix64(mix64(seed + kGolden) ^ mix64(stream * kGolden + 0x632be59bd9b4e019ULL));
  state_ = key;
  gamma_ = mix64(key + kGolden) | 1ULL;
}

std::uint64_t StreamRng::next_u64() {
  state_ += gamma_;
  return mix64(state_);
}

double StreamRng::next_open_unit() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace doleans
