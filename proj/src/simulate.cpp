#include "vbchain/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "vbchain/errors.hpp"
#include "vbchain/spectral.hpp"
#include "vbchain/variance.hpp"

namespace vbchain {

namespace {

long zwalk_step(long x, RngStream& rng) {
  const double u = rng.uniform();
  if (x > 0) return (u < 2.0 / 3.0) ? x - 1 : x + 1;
  if (x < 0) return (u < 2.0 / 3.0) ? x + 1 : x - 1;
  return (u < 0.5) ? -1 : 1;
}

// Materialized transition rows so the sampling loop avoids per-step
// expression temporaries.
std::vector<Eigen::VectorXd> kernel_rows(const ReversibleKernel& K) {
  std::vector<Eigen::VectorXd> rows(static_cast<std::size_t>(K.size()));
  for (Eigen::Index i = 0; i < K.size(); ++i) {
    rows[static_cast<std::size_t>(i)] = K.P.row(i).transpose();
  }
  return rows;
}

// Shared replicate runner: fills results[r] = f(r) for r in [0, m) using a
// small thread pool; deterministic because replicate r only touches its own
// seeded stream.
template <typename F>
std::vector<double> run_replicates(int m, F&& f) {
  std::vector<double> results(static_cast<std::size_t>(m));
  const unsigned hw = std::thread::hardware_concurrency();
  const int workers =
      std::max(1, std::min<int>(static_cast<int>(hw == 0 ? 1 : hw), 8));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (int r = w; r < m; r += workers) {
        results[static_cast<std::size_t>(r)] = f(r);
      }
    });
  }
  for (std::thread& t : pool) t.join();
  return results;
}

CltReport summarize_clt(long n, int m, std::vector<double> sums,
                        double reference_v, bool reference_infinite) {
  CltReport rep;
  rep.n = n;
  rep.replicates = m;
  rep.normalized_sums = std::move(sums);

  double mean = 0.0;
  for (double s : rep.normalized_sums) mean += s;
  mean /= static_cast<double>(m);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double s : rep.normalized_sums) {
    const double d = s - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double var = m2 / static_cast<double>(m - 1);
  m2 /= static_cast<double>(m);
  m3 /= static_cast<double>(m);
  m4 /= static_cast<double>(m);

  rep.empirical_mean = mean;
  rep.empirical_var = var;
  rep.reference_v = reference_v;
  rep.reference_infinite = reference_infinite;
  rep.z_score = reference_infinite
                    ? std::numeric_limits<double>::quiet_NaN()
                    : (var - reference_v) /
                          (reference_v * std::sqrt(2.0 / (m - 1.0)));
  rep.skewness = m3 / std::pow(m2, 1.5);
  rep.excess_kurtosis = m4 / (m2 * m2) - 3.0;
  return rep;
}

}  // namespace

Trace simulate_path(const ReversibleKernel& K, int x0, long n,
                    std::uint64_t seed) {
  if (x0 < 0 || x0 >= K.size()) {
    throw InvalidStart("start state outside the kernel's state space");
  }
  if (n < 1) {
    throw DomainError("path length must be >= 1");
  }
  RngStream rng(seed);
  Trace trace;
  trace.seed = seed;
  trace.source = "kernel:n=" + std::to_string(K.size()) + ";x0=" +
                 std::to_string(x0);
  trace.generator = RngStream::generator_id();
  trace.values.reserve(static_cast<std::size_t>(n));
  const std::vector<Eigen::VectorXd> rows = kernel_rows(K);
  int x = x0;
  trace.values.push_back(static_cast<double>(x));
  for (long i = 1; i < n; ++i) {
    x = rng.categorical(rows[static_cast<std::size_t>(x)]);
    trace.values.push_back(static_cast<double>(x));
  }
  return trace;
}

Trace simulate_path(const ReversibleKernel& K, const Functional& h, int x0,
                    long n, std::uint64_t seed) {
  if (h.h.size() != K.size()) {
    throw DimensionMismatch("functional length differs from state count");
  }
  Trace trace = simulate_path(K, x0, n, seed);
  trace.source += ";h";
  for (double& v : trace.values) {
    v = h.h[static_cast<Eigen::Index>(v)];
  }
  return trace;
}

Trace simulate_path(Example9Z, long x0, long n, std::uint64_t seed) {
  if (n < 1) {
    throw DomainError("path length must be >= 1");
  }
  RngStream rng(seed);
  Trace trace;
  trace.seed = seed;
  trace.source = "example9-z;x0=" + std::to_string(x0);
  trace.generator = RngStream::generator_id();
  trace.values.reserve(static_cast<std::size_t>(n));
  long x = x0;
  trace.values.push_back(static_cast<double>(x));
  for (long i = 1; i < n; ++i) {
    x = zwalk_step(x, rng);
    trace.values.push_back(static_cast<double>(x));
  }
  return trace;
}

Trace simulate_path(const SamplerSpec& spec, double x0, long n,
                    std::uint64_t seed, long burn_in) {
  if (!spec.target.support.contains(x0)) {
    throw InvalidStart("start state outside the target support");
  }
  if (n < 1) {
    throw DomainError("path length must be >= 1");
  }
  if (burn_in < 0) {
    throw DomainError("burn-in must be >= 0");
  }
  RngStream rng(seed);
  Trace trace;
  trace.seed = seed;
  trace.source = "sampler:" + spec.target.name + ";kind=" +
                 std::to_string(static_cast<int>(spec.proposal.kind));
  trace.generator = RngStream::generator_id();
  trace.values.reserve(static_cast<std::size_t>(n));
  double x = x0;
  for (long i = 0; i < burn_in; ++i) {
    x = mh_step(spec, x, rng).x;
  }
  trace.values.push_back(x);
  for (long i = 1; i < n; ++i) {
    x = mh_step(spec, x, rng).x;
    trace.values.push_back(x);
  }
  return trace;
}

long example9z_stationary_draw(RngStream& rng) {
  const double u = rng.uniform();
  if (u < 0.25) return 0;
  const long side = (rng.uniform() < 0.5) ? -1 : 1;
  const long magnitude =
      static_cast<long>(std::ceil(-std::log2(rng.uniform())));
  return side * std::max<long>(1, magnitude);
}

BatchMeans batch_means_variance(const std::vector<double>& values,
                                int n_batches) {
  const long n = static_cast<long>(values.size());
  int nb = n_batches;
  if (nb <= 0) {
    nb = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
  }
  if (nb < 2) {
    throw TraceTooShort("batch means needs at least 2 batches");
  }
  const long batch_size = n / nb;
  if (batch_size < 1) {
    throw TraceTooShort("trace shorter than the requested batch count");
  }

  std::vector<double> means(static_cast<std::size_t>(nb));
  for (int b = 0; b < nb; ++b) {
    double acc = 0.0;
    const long start = static_cast<long>(b) * batch_size;
    for (long i = 0; i < batch_size; ++i) {
      acc += values[static_cast<std::size_t>(start + i)];
    }
    means[static_cast<std::size_t>(b)] = acc / static_cast<double>(batch_size);
  }
  double grand = 0.0;
  for (double v : means) grand += v;
  grand /= static_cast<double>(nb);
  double ss = 0.0;
  for (double v : means) ss += (v - grand) * (v - grand);
  const double sample_var = ss / static_cast<double>(nb - 1);

  BatchMeans out;
  out.n_batches = nb;
  out.batch_size = batch_size;
  out.estimate = static_cast<double>(batch_size) * sample_var;
  out.std_error = out.estimate * std::sqrt(2.0 / (nb - 1.0));
  return out;
}

CltReport clt_diagnostic(const ReversibleKernel& K, const Functional& h,
                         long n, int m, std::uint64_t seed) {
  if (m < 50) {
    throw DomainError("CLT diagnostic needs at least 50 replicates");
  }
  if (n < 1) {
    throw DomainError("path length must be >= 1");
  }
  if (h.h.size() != K.size()) {
    throw DimensionMismatch("functional length differs from state count");
  }
  const SpectralDecomposition D = eigendecompose(K);
  const AsymptoticVariance v = asymptotic_variance_exact(D, h);
  const double mean = K.pi.dot(h.h);
  const Eigen::VectorXd centered = h.h.array() - mean;
  const std::vector<Eigen::VectorXd> rows = kernel_rows(K);

  std::vector<double> sums = run_replicates(m, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    int x = rng.categorical(K.pi);
    double acc = centered[x];
    for (long i = 1; i < n; ++i) {
      x = rng.categorical(rows[static_cast<std::size_t>(x)]);
      acc += centered[x];
    }
    return acc / std::sqrt(static_cast<double>(n));
  });
  return summarize_clt(n, m, std::move(sums), v.value, v.infinite);
}

CltReport clt_diagnostic(Example9Z, long n, int m, std::uint64_t seed,
                         double reference_v) {
  if (m < 50) {
    throw DomainError("CLT diagnostic needs at least 50 replicates");
  }
  if (n < 1) {
    throw DomainError("path length must be >= 1");
  }
  std::vector<double> sums = run_replicates(m, [&](int r) {
    RngStream rng(seed, static_cast<std::uint64_t>(r));
    long x = example9z_stationary_draw(rng);
    double acc = static_cast<double>(x);
    for (long i = 1; i < n; ++i) {
      x = zwalk_step(x, rng);
      acc += static_cast<double>(x);
    }
    return acc / std::sqrt(static_cast<double>(n));
  });
  return summarize_clt(n, m, std::move(sums), reference_v, false);
}

}  // namespace vbchain
