#include "vbchain/rng.hpp"

#include <cmath>

namespace vbchain {

namespace detail {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace detail

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
  // Two splitmix64 rounds decorrelate (seed, stream) pairs that differ in a
  // single bit before they reach the engine's seeding routine.
  const std::uint64_t key =
      detail::splitmix64(detail::splitmix64(seed) ^
                         detail::splitmix64(stream + 0x51A09E5ULL));
  engine_.seed(key);
}

double RngStream::uniform() {
  // 53-bit mantissa, shifted into the open interval (0, 1).
  const std::uint64_t bits = engine_() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  double v1 = 0.0, v2 = 0.0, s = 0.0;
  do {
    v1 = 2.0 * uniform() - 1.0;
    v2 = 2.0 * uniform() - 1.0;
    s = v1 * v1 + v2 * v2;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_normal_ = v2 * f;
  has_cached_normal_ = true;
  return v1 * f;
}

int RngStream::categorical(const Eigen::VectorXd& probs) {
  const double u = uniform();
  double acc = 0.0;
  const Eigen::Index n = probs.size();
  for (Eigen::Index i = 0; i < n; ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(n - 1);
}

}  // namespace vbchain
