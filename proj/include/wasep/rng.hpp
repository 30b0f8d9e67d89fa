#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace wasep {

/// Counter-based generator: output i is mix64(key + i * GAMMA) where mix64
/// is the SplitMix64 finalizer. Streams are derived by hashing
/// (seed, replica, module tag) into the key, so replica r of a run produces
/// the same numbers regardless of how replicas are scheduled across threads.
class Rng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
  }

  explicit Rng(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

  /// Stream derivation: key = mix(mix(seed) ^ mix(tag) ^ mix(replica)).
  Rng(std::uint64_t seed, std::uint64_t tag, std::uint64_t replica)
      : key_(mix64(mix64(seed + kGamma) ^ mix64(tag + 2 * kGamma) ^
                   mix64(replica + 3 * kGamma))) {}

  std::uint64_t next_u64() { return mix64(key_ + (++counter_) * kGamma); }

  /// Uniform in (0, 1); never returns 0 so logs are safe.
  double uniform() {
    return ((next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // 128-bit multiply rejection-free bound is overkill here; modulo bias is
    // below 2^-53 for the n used in this project (n << 2^32).
    return static_cast<std::uint64_t>(uniform() * n) % n;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Geometric on {1, 2, ...} with failure probability mu (success 1 - mu).
  /// Inverse CDF in log space; log_mu = log(mu) must be < 0.
  long long geometric_from_log(double log_mu) {
    if (!(log_mu < 0.0))
      throw std::invalid_argument("geometric: log(mu) must be negative");
    double g = std::floor(std::log(uniform()) / log_mu);
    long long m = 1 + (long long)g;
    if (m < 1) m = 1;
    if (m > 1000000000LL)
      throw std::overflow_error("geometric sample exceeds 1e9");
    return m;
  }

  double normal() {
    // Box-Muller, one value per call.
    double u = uniform(), v = uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * M_PI * v);
  }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

/// Module tags for stream derivation (documented contract: changing a tag
/// changes the stream, so each module owns its randomness).
namespace stream_tag {
constexpr std::uint64_t kEquilibrium = 1;
constexpr std::uint64_t kDynamics = 2;
constexpr std::uint64_t kAuxLine = 3;
constexpr std::uint64_t kMartingale = 4;
constexpr std::uint64_t kEstimators = 5;
} // namespace stream_tag

} // namespace wasep
