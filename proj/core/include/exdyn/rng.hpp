#pragma once

#include <cstdint>
#include <random>

namespace exdyn {

// Seedable random stream with a fixed, platform-independent mapping from the
// 64-bit engine output to uniform and normal variates (the standard library
// distributions are implementation-defined, so they are not used).
//
// Streams are split by hashing (master seed, stream index) through
// SplitMix64; replica i of an ensemble always sees the same numbers whether
// it is run alone or as part of the ensemble.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  // Independent sub-stream for replica `index` under `master_seed`.
  static Rng for_stream(std::uint64_t master_seed, std::uint64_t index);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on [0, 1].
  double uniform_closed() {
    return static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  }

  // Standard normal via the Marsaglia polar method.
  double normal();

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace exdyn
