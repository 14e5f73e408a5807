#pragma once

#include <cstdint>
#include <random>

namespace beliefrev {

// Deterministic random source. Every stochastic component draws through this
// wrapper so a run is fully reproducible from a single seed, independent of
// the platform's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, bound), bound in [1, 2^31).
  int next_int(int bound) {
    const auto wide = static_cast<unsigned __int128>(engine_()) *
                      static_cast<std::uint64_t>(bound);
    return static_cast<int>(wide >> 64);
  }

  // splitmix64 mix of (seed, stream); decorrelates substreams (training vs
  // evaluation) that share one user-facing seed.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace beliefrev
