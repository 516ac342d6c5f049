#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vbchain/functional.hpp"
#include "vbchain/kernel.hpp"
#include "vbchain/mh_continuous.hpp"
#include "vbchain/rng.hpp"

namespace vbchain {

// A simulated path of functional evaluations plus everything needed to
// regenerate it bit-exactly: the seed, a source descriptor, and the
// generator identity.
struct Trace {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string source;
  std::string generator;
};

// Tag for the untruncated drift walk on the integers: moves toward the
// origin with probability 2/3 and away with 1/3 (even split at 0), with no
// holding anywhere, so the walk alternates parity.  Shares its stationary
// law with build_example9 in the infinite-window limit.
struct Example9Z {};

// Path of state indices (as doubles) from a finite kernel: values[0] is x0,
// followed by n - 1 categorical transitions.  Throws InvalidStart.
Trace simulate_path(const ReversibleKernel& K, int x0, long n,
                    std::uint64_t seed);

// Same walk, recording h(state) instead of the state index.
Trace simulate_path(const ReversibleKernel& K, const Functional& h, int x0,
                    long n, std::uint64_t seed);

// Integer drift walk on all of Z starting at x0.
Trace simulate_path(Example9Z, long x0, long n, std::uint64_t seed);

// Continuous sampler path: burn_in steps are discarded, then n states are
// recorded (the first recorded value is the post-burn-in state).
Trace simulate_path(const SamplerSpec& spec, double x0, long n,
                    std::uint64_t seed, long burn_in = 10000);

// Draw from the stationary law of the infinite drift walk: mass 1/4 at 0 and
// (3/8) 2^{-k} at each of +/-k.
long example9z_stationary_draw(RngStream& rng);

struct BatchMeans {
  double estimate = 0.0;
  double std_error = 0.0;
  int n_batches = 0;
  long batch_size = 0;
};

// Asymptotic-variance estimate from one long trace: split into n_batches
// consecutive batches (default floor(sqrt(n)); trailing remainder dropped),
// estimate = batch_size * sample variance of the batch means, standard error
// from the normal approximation estimate * sqrt(2 / (n_batches - 1)).
// Throws TraceTooShort when fewer than 2 batches or empty batches result.
BatchMeans batch_means_variance(const std::vector<double>& values,
                                int n_batches = 0);

struct CltReport {
  long n = 0;
  int replicates = 0;
  std::vector<double> normalized_sums;  // n^{-1/2} sum of centered values
  double empirical_mean = 0.0;
  double empirical_var = 0.0;
  double reference_v = 0.0;
  bool reference_infinite = false;
  double z_score = 0.0;
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
};

// Distributional check of the normalized partial sums against the exact
// asymptotic variance: m independent replicates (m >= 50), each started from
// exact stationarity with its own stream, run concurrently but reproducibly.
// z = (empirical_var - v) / (v sqrt(2/(m-1))).
CltReport clt_diagnostic(const ReversibleKernel& K, const Functional& h,
                         long n, int m, std::uint64_t seed);

// Variant for the infinite drift walk with h = identity (stationary mean 0);
// the reference variance is supplied by the caller, typically from a wide
// finite-window truncation.
CltReport clt_diagnostic(Example9Z, long n, int m, std::uint64_t seed,
                         double reference_v);

}  // namespace vbchain
