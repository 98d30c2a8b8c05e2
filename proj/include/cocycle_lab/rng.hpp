#pragma once

#include <cstdint>

namespace cocycle_lab {

/// Counter-based stream: the i-th output is mix(key + i * golden), so a
/// stream is fully determined by (base_seed, stream_id) and streams for
/// different trials never share state.
class CounterRng {
 public:
  CounterRng(std::uint64_t base_seed, std::uint64_t stream_id)
      : key_(mix(base_seed ^ mix(stream_id + kGolden))) {}

  std::uint64_t next() {
    counter_ += kGolden;
    return mix(key_ + counter_);
  }

  /// Uniform on [0, 1) with 53 bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// 1 with probability p, else 0.
  std::uint8_t bernoulli(double p) { return uniform() < p ? 1 : 0; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace cocycle_lab
