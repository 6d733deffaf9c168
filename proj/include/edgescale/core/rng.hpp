#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace edgescale {

// Deterministic substream generator built on splitmix64. Each (seed, stream,
// key, round) tuple names an independent stream, so the workload trace of a
// run depends only on the seed and the server, never on how many draws some
// other component consumed. std::mt19937_64 would also be portable, but the
// std distributions on top of it are implementation defined, which would
// break byte-identical traces across standard libraries.
class SubstreamRng {
 public:
  // stream labels; keep values stable, they are part of the trace contract
  static constexpr std::uint64_t kWorkloadStream = 0x01;
  static constexpr std::uint64_t kNoiseStream = 0x02;
  static constexpr std::uint64_t kExpandStream = 0x03;

  SubstreamRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t key,
               std::uint64_t round) {
    state_ = mix(seed);
    state_ = mix(state_ ^ (stream * kGamma));
    state_ = mix(state_ ^ (key * kGamma));
    state_ = mix(state_ ^ (round * kGamma));
  }

  std::uint64_t next_u64() {
    state_ += kGamma;
    return mix(state_);
  }

  // uniform in [0, 1)
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform in [lo, hi)
  double uniform(double lo, double hi) {
    if (hi < lo) throw std::invalid_argument("uniform: hi < lo");
    return lo + (hi - lo) * uniform01();
  }

  // uniform integer in [lo, hi], inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    if (hi < lo) throw std::invalid_argument("uniform_int: hi < lo");
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
    return lo + static_cast<std::int64_t>(wide >> 64);
  }

  // standard normal via Box-Muller
  double normal() {
    double u1 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace edgescale
