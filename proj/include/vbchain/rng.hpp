#pragma once

#include <cstdint>
#include <random>
#include <string>

#include <Eigen/Core>

namespace vbchain {

// Deterministic random stream with explicit stream splitting.
//
// The engine is std::mt19937_64 (output sequence pinned by the standard,
// period 2^19937-1), seeded from a splitmix64 hash of (seed, stream) so that
// distinct stream indices give statistically independent substreams for
// parallel replicates. All derived variates (uniform / normal / categorical)
// are built directly from engine words, so traces are reproducible
// bit-for-bit across standard library implementations.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on the open interval (0, 1); never returns an endpoint, so
  // log(uniform()) is always finite.
  double uniform();

  // Standard normal via the polar Box-Muller method (second variate cached).
  double normal();

  // Index i with probability probs[i], by CDF inversion on one uniform.
  // probs must be nonnegative; it is trusted to sum to ~1 (the last index
  // absorbs any rounding deficit).
  int categorical(const Eigen::VectorXd& probs);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Identity string recorded in Trace metadata.
  static const char* generator_id() { return "mt19937_64/polar-box-muller/v1"; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

namespace detail {
// splitmix64 finalizer; used for stream-key derivation.
std::uint64_t splitmix64(std::uint64_t x);
}  // namespace detail

}  // namespace vbchain
