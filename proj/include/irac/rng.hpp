#ifndef IRAC_RNG_HPP
#define IRAC_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace irac {

/// splitmix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed for the stream belonging to (base_seed, stream_index). Instances,
/// experiment runs and dataset samples each own one stream.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x5851F42D4C957F2Dull));
}

/// Deterministic RNG with hand-rolled variate transforms. The transforms
/// are written out (instead of using std::*_distribution) so the sampled
/// sequence is identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return v % n;
  }

  /// Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    double u1 = (static_cast<double>(eng_() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  /// Lognormal with the requested mean and relative standard deviation.
  /// rel_std = 0 degenerates to the mean exactly (one normal is still
  /// consumed to keep stream layout independent of parameters).
  double lognormal_mean_relstd(double mean, double rel_std) {
    double z = normal();
    double s2 = std::log1p(rel_std * rel_std);
    double mu = std::log(mean) - 0.5 * s2;
    return std::exp(mu + std::sqrt(s2) * z);
  }

private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace irac

#endif  // IRAC_RNG_HPP
