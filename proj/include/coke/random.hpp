#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace coke {

// Independent consumers draw from independent streams so that extra draws
// in one (say, the synthetic generator) never shift another (the sampler).
enum class Stream : std::uint64_t {
  ClusterSampler = 1,
  TieBreak = 2,
  Synthetic = 3,
  Shuffle = 4,
  Baseline = 5,
};

// SplitMix64 finalizer over (base, stream).
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream);

// Deterministic, single-consumer random source. Equal seeds give equal
// draw sequences for a given standard library build.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  static RandomSource for_stream(std::uint64_t seed, Stream s) {
    return RandomSource(stream_seed(seed, static_cast<std::uint64_t>(s)));
  }

  // Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  // Gamma(shape, 1).
  double gamma(double shape) { return std::gamma_distribution<double>(shape, 1.0)(engine_); }

  // Uniform integer in [0, n).
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  // Uniform integer in [lo, hi].
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

  // Textual engine state for checkpoints.
  std::string state() const;
  void restore_state(const std::string& s);

 private:
  std::mt19937_64 engine_;
};

}  // namespace coke
