#pragma once

#include <cmath>
#include <cstdint>

namespace torscan::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Counter-based generator: one independent stream per (seed, stream_id) pair.
// Streams never share state, so work distributed over (i, j) grids stays
// reproducible no matter the evaluation order.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : state_(mix64(seed + kGolden) ^ mix64(stream_id + kGolden)) {}

  std::uint64_t next() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Unbiased uniform draw from [0, m).
  std::uint64_t below(std::uint64_t m) {
    const std::uint64_t limit = m * (~std::uint64_t{0} / m);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % m;
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [-bound, bound].
  double uniform_symmetric(double bound) {
    return (2.0 * uniform01() - 1.0) * bound;
  }

  // Standard normal via Box-Muller (two fresh uniforms per call).
  double normal() {
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  std::uint64_t state_;
};

// Stream-id conventions shared by the sketching and emulation code paths, so
// that the same (seed, index) always yields the same random vector regardless
// of which pipeline asked for it.
inline std::uint64_t right_vector_stream(int j) {
  return static_cast<std::uint64_t>(j) << 1;
}
inline std::uint64_t left_vector_stream(int i) {
  return (static_cast<std::uint64_t>(i) << 1) | 1;
}
inline std::uint64_t overlap_noise_stream(int i, int j) {
  return (std::uint64_t{1} << 62) | (static_cast<std::uint64_t>(i) << 31) |
         static_cast<std::uint64_t>(j);
}
inline std::uint64_t probe_stream(int i) {
  return (std::uint64_t{1} << 61) | static_cast<std::uint64_t>(i);
}

}  // namespace torscan::rng
