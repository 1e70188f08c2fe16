#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace igs {

// Deterministic, stream-splittable generator. (seed, stream) pairs are mixed
// through the splitmix64 finalizer into independent mt19937_64 states. Normal
// variates are produced by Box-Muller on explicit 53-bit uniforms instead of
// std::normal_distribution, so sequences are byte-for-byte reproducible across
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream), eng_(derive(seed, stream)) {}

  // Child generator for substream `sub`, independent of this one's position.
  Rng split(std::uint64_t sub) const {
    return Rng(mix(seed_ ^ mix(stream_ + 0x632be59bd9b4e019ull)), sub);
  }

  std::uint64_t next_u64() { return eng_(); }

  // uniform on [0, 1)
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // circularly symmetric complex normal with E|z|^2 = var
  std::complex<double> cnormal(double var = 1.0) {
    const double s = std::sqrt(0.5 * var);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return mix(mix(seed) ^ mix(0x5851f42d4c957f2dull * (stream + 1)));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace igs
