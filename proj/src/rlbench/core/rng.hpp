#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include <Eigen/Core>

namespace rlbench {

// splitmix64 mixer, used to derive engine seeds from (seed, stream) pairs.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream ids partition the run's randomness into independent, reproducible
// streams. Layout: tag | iteration | index. Iterations up to 2^28 and
// 2^24 draws per (tag, iteration) are far beyond any configured budget.
enum class StreamTag : std::uint64_t {
  kPolicyInit = 1,
  kSampling = 2,
  kAlgorithm = 3,
  kExploration = 4,
};

inline std::uint64_t stream_id(StreamTag tag, std::uint64_t iteration,
                               std::uint64_t index) {
  return (static_cast<std::uint64_t>(tag) << 52) | (iteration << 24) | index;
}

// Deterministic RNG: identical (seed, stream) pairs give identical draw
// sequences. Uniform and Gaussian draws are implemented directly on top of
// the mt19937_64 engine (Box-Muller for Gaussians) so the stream does not
// depend on the standard library's unspecified distribution algorithms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed),
        stream_(stream),
        engine_(splitmix64(splitmix64(seed) ^ ~splitmix64(stream))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // uniform in [0, 1)
  double canonical() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

  // standard normal; consumes exactly two engine draws
  double normal() {
    double u1 = 0.0;
    do {
      u1 = canonical();
    } while (u1 <= 0.0);
    const double u2 = canonical();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * M_PI * u2);  // second Box-Muller value discarded
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  Eigen::VectorXd normal_vector(int n) {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  // uniform integer in [0, n), bias-free via rejection
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % n;
  }

  // raw engine draw, used to derive sub-streams
  std::uint64_t draw_u64() { return engine_(); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace rlbench
