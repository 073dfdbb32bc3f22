#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rre {

/// Derives an independent stream seed from a base seed. splitmix64 finalizer,
/// so nearby (base, stream) pairs map to unrelated seeds.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seedable random source used everywhere randomness is needed.
///
/// Wraps std::mt19937_64 (whose output sequence is fixed by the standard) and
/// derives uniform and Gaussian variates with explicit arithmetic, so the same
/// seed yields the same stream on every platform and toolchain.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53-bit resolution.
  double uniform01() { return std::ldexp(static_cast<double>(gen_() >> 11), -53); }

  /// Standard normal via Box-Muller; two uniforms per draw, no cached state.
  double gaussian() {
    double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double gaussian(double sigma) { return sigma * gaussian(); }

  /// Unbiased integer in [0, bound) by rejection.
  std::uint64_t uniform_index(std::uint64_t bound) {
    const std::uint64_t limit = std::uint64_t(-1) - std::uint64_t(-1) % bound;
    std::uint64_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rre
