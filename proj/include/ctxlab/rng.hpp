#ifndef CTXLAB_RNG_HPP
#define CTXLAB_RNG_HPP

#include <cstdint>

namespace ctxlab {

// SplitMix64 finalizer. Bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Counter-based generator: the k-th output is a pure function of
// (seed, stream, k), so independent streams can be drawn in any order or in
// parallel and still reproduce the sequential results bit for bit.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(seed ^ mix64(stream + 0x9E3779B97F4A7C15ull))) {}

  std::uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ull;
    return mix64(key_ ^ counter_);
  }

  // Uniform double strictly inside (0,1): 53-bit mantissa shifted off zero.
  double next_unit_open() {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ctxlab

#endif
