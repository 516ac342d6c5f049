#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "vbchain/errors.hpp"
#include "vbchain/kernel.hpp"
#include "vbchain/simulate.hpp"
#include "vbchain/spectral.hpp"
#include "vbchain/variance.hpp"

using namespace vbchain;

namespace {

ReversibleKernel two_state_base() {
  Eigen::MatrixXd P(2, 2);
  P << 0.7, 0.3, 0.6, 0.4;
  return from_matrix(P);
}

Functional worked_functional(const ReversibleKernel& K) {
  Eigen::VectorXd h(2);
  h << 1.0, -2.0;
  return make_functional(K, h);
}

}  // namespace

TEST_CASE("kernel paths regenerate bit-exactly from their seed") {
  const ReversibleKernel K = two_state_base();
  const Trace a = simulate_path(K, 0, 5000, 77);
  const Trace b = simulate_path(K, 0, 5000, 77);
  REQUIRE(a.values.size() == 5000);
  CHECK(a.values == b.values);
  CHECK(a.seed == 77);
  CHECK(a.source == "kernel:n=2;x0=0");
  CHECK(a.generator == RngStream::generator_id());

  const Trace c = simulate_path(K, 0, 5000, 78);
  CHECK(a.values != c.values);

  CHECK_THROWS_AS(simulate_path(K, 5, 10, 1), InvalidStart);
  CHECK_THROWS_AS(simulate_path(K, -1, 10, 1), InvalidStart);
  CHECK_THROWS_AS(simulate_path(K, 0, 0, 1), DomainError);
}

TEST_CASE("functional paths map states through h") {
  const ReversibleKernel K = two_state_base();
  const Functional f = worked_functional(K);
  const Trace states = simulate_path(K, 0, 1000, 5);
  const Trace mapped = simulate_path(K, f, 0, 1000, 5);
  REQUIRE(states.values.size() == mapped.values.size());
  for (std::size_t i = 0; i < states.values.size(); ++i) {
    const int s = static_cast<int>(states.values[i]);
    CHECK(mapped.values[i] == f.h[s]);
  }
}

TEST_CASE("long kernel paths visit states at stationary frequencies") {
  const ReversibleKernel K = two_state_base();
  const Trace t = simulate_path(K, 0, 1000000, 42);
  long zero_count = 0;
  for (double v : t.values) {
    zero_count += (v == 0.0) ? 1 : 0;
  }
  const double freq = static_cast<double>(zero_count) / 1e6;
  CHECK(std::abs(freq - 2.0 / 3.0) < 0.002);
}

TEST_CASE("the integer drift walk alternates parity and recurs to 0") {
  const Trace t = simulate_path(Example9Z{}, 0, 200000, 91);
  REQUIRE(t.values.size() == 200000);
  CHECK(t.source == "example9-z;x0=0");
  long zero_count = 0;
  for (std::size_t i = 0; i + 1 < t.values.size(); ++i) {
    CHECK(std::abs(t.values[i + 1] - t.values[i]) == 1.0);
    zero_count += (t.values[i] == 0.0) ? 1 : 0;
  }
  // Stationary mass at 0 is 1/4; parity forces the time-average toward it
  // only through the alternating pattern, so allow a wide band.
  const double freq = static_cast<double>(zero_count) / 200000.0;
  CHECK(freq > 0.15);
  CHECK(freq < 0.35);

  const Trace u = simulate_path(Example9Z{}, 3, 100, 91);
  CHECK(u.values[0] == 3.0);
  const Trace v = simulate_path(Example9Z{}, 0, 1000, 91);
  const Trace w = simulate_path(Example9Z{}, 0, 1000, 91);
  CHECK(v.values == w.values);
}

TEST_CASE("stationary draws for the drift walk match their law") {
  RngStream rng(92, 0);
  const int draws = 100000;
  long at_zero = 0, at_one = 0, at_minus_two = 0;
  for (int i = 0; i < draws; ++i) {
    const long m = example9z_stationary_draw(rng);
    at_zero += (m == 0) ? 1 : 0;
    at_one += (m == 1) ? 1 : 0;
    at_minus_two += (m == -2) ? 1 : 0;
  }
  // pi(0) = 1/4, pi(1) = 3/16, pi(-2) = 3/32.
  CHECK(std::abs(at_zero / 1e5 - 0.25) < 0.006);
  CHECK(std::abs(at_one / 1e5 - 0.1875) < 0.006);
  CHECK(std::abs(at_minus_two / 1e5 - 0.09375) < 0.005);
}

TEST_CASE("sampler paths burn in and regenerate deterministically") {
  const SamplerSpec spec = make_random_walk_sampler(laplace_target(), 1.0);
  const Trace a = simulate_path(spec, 0.0, 2000, 13, 500);
  const Trace b = simulate_path(spec, 0.0, 2000, 13, 500);
  REQUIRE(a.values.size() == 2000);
  CHECK(a.values == b.values);

  const Trace none = simulate_path(spec, 0.25, 10, 13, 0);
  CHECK(none.values[0] == 0.25);

  CHECK_THROWS_AS(simulate_path(spec, 0.0, 0, 13, 0), DomainError);
  CHECK_THROWS_AS(simulate_path(spec, 0.0, 10, 13, -1), DomainError);
  const SamplerSpec hc = make_state_dependent_sampler(half_cauchy_target(), 1.0);
  CHECK_THROWS_AS(simulate_path(hc, -2.0, 10, 13, 0), InvalidStart);
}

TEST_CASE("batch means recover iid variance and degenerate cases") {
  RngStream rng(93, 0);
  std::vector<double> iid(100000);
  for (double& v : iid) {
    v = rng.normal();
  }
  const BatchMeans bm = batch_means_variance(iid);
  CHECK(bm.n_batches == 316);
  CHECK(bm.batch_size == 316);
  CHECK(std::abs(bm.estimate - 1.0) <= 4.0 * bm.std_error);
  CHECK(std::abs(bm.estimate - 1.0) < 0.4);

  const std::vector<double> constant(1000, 3.5);
  const BatchMeans flat = batch_means_variance(constant);
  CHECK(flat.estimate == 0.0);

  CHECK_THROWS_AS(batch_means_variance(std::vector<double>{1.0}),
                  TraceTooShort);
  CHECK_THROWS_AS(batch_means_variance(iid, 200001), TraceTooShort);

  const BatchMeans custom = batch_means_variance(iid, 100);
  CHECK(custom.n_batches == 100);
  CHECK(custom.batch_size == 1000);
}

TEST_CASE("batch means of a kernel eigenfunction approach the exact variance") {
  const ReversibleKernel K = two_state_base();
  const Functional f = worked_functional(K);
  const Trace t = simulate_path(K, f, 0, 1000000, 94);
  const BatchMeans bm = batch_means_variance(t.values);
  const double v = 22.0 / 9.0;
  CHECK(std::abs(bm.estimate - v) <= 4.0 * bm.std_error);
}

TEST_CASE("clt diagnostics match the exact variance on the two-state chain") {
  const ReversibleKernel K = two_state_base();
  const Functional f = worked_functional(K);
  const CltReport rep = clt_diagnostic(K, f, 20000, 64, 95);

  CHECK(rep.n == 20000);
  CHECK(rep.replicates == 64);
  REQUIRE(rep.normalized_sums.size() == 64);
  CHECK(rep.reference_v == doctest::Approx(22.0 / 9.0).epsilon(1e-12));
  CHECK_FALSE(rep.reference_infinite);
  CHECK(std::abs(rep.z_score) < 4.0);
  CHECK(std::abs(rep.empirical_mean) <= 4.0 * std::sqrt(rep.reference_v / 64.0));

  const CltReport again = clt_diagnostic(K, f, 20000, 64, 95);
  CHECK(rep.normalized_sums == again.normalized_sums);
  CHECK(rep.z_score == again.z_score);

  CHECK_THROWS_AS(clt_diagnostic(K, f, 1000, 49, 95), DomainError);
  CHECK_THROWS_AS(clt_diagnostic(K, f, 0, 64, 95), DomainError);
  Eigen::VectorXd wrong(3);
  wrong.setZero();
  Functional bad;
  bad.h = wrong;
  bad.centered = wrong;
  CHECK_THROWS_AS(clt_diagnostic(K, bad, 1000, 64, 95), DimensionMismatch);
}

TEST_CASE("lazier kernels report larger reference variances") {
  const ReversibleKernel K = two_state_base();
  const Functional f = worked_functional(K);
  double prev = 0.0;
  for (double a : {0.0, 0.3, 0.6}) {
    const ReversibleKernel L = lazy_mixture(K, a);
    const Functional g = make_functional(L, f.h);
    const CltReport rep = clt_diagnostic(L, g, 100, 50, 1);
    CHECK(rep.reference_v > prev);
    prev = rep.reference_v;
  }
}

TEST_CASE("drift-walk clt diagnostic accepts a caller-supplied reference") {
  // Reference from a wide truncated window; the walk itself is unbounded.
  const auto [P1, P2] = build_example9(40);
  const SpectralDecomposition D = eigendecompose(P1);
  Eigen::VectorXd h(81);
  for (int m = -40; m <= 40; ++m) {
    h[m + 40] = m;
  }
  const Functional f = make_functional(P1, h);
  const double v = asymptotic_variance_exact(D, f).value;
  CHECK(f.var_pi == doctest::Approx(4.5).epsilon(1e-9));
  CHECK(v == doctest::Approx(94.5).epsilon(1e-6));

  const CltReport rep = clt_diagnostic(Example9Z{}, 20000, 64, 96, v);
  CHECK(rep.reference_v == v);
  CHECK(std::abs(rep.z_score) < 4.0);
}
