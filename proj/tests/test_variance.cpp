#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "test_util.hpp"
#include "vbchain/errors.hpp"
#include "vbchain/kernel.hpp"
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

// Two-state kernel with uniform stationary law and prescribed mean-zero
// eigenvalue lambda: off-diagonal (1 - lambda) / 2 each way.
ReversibleKernel uniform_two_state(double lambda) {
  const double p = (1.0 - lambda) / 2.0;
  Eigen::MatrixXd P(2, 2);
  P << 1.0 - p, p, p, 1.0 - p;
  Eigen::VectorXd pi(2);
  pi << 0.5, 0.5;
  return from_matrix(P, pi);
}

// O(n) reference: gamma_0 + 2 sum (1 - k/n) gamma_k for a single eigenvalue.
double cesaro_reference(double w, double lambda, long n) {
  double sum = w;
  double pow_l = 1.0;
  for (long k = 1; k < n; ++k) {
    pow_l *= lambda;
    sum += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(n)) * w *
           pow_l;
  }
  return sum;
}

}  // namespace

TEST_CASE("exact variance of the worked eigenfunction is 22/9") {
  const ReversibleKernel K = two_state_base();
  const SpectralDecomposition D = eigendecompose(K);
  const Functional f = worked_functional(K);
  const AsymptoticVariance v = asymptotic_variance_exact(D, f);
  CHECK_FALSE(v.infinite);
  CHECK(v.value == doctest::Approx(22.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("autocovariances of the worked eigenfunction") {
  const ReversibleKernel K = two_state_base();
  const SpectralDecomposition D = eigendecompose(K);
  const Functional f = worked_functional(K);
  CHECK(autocovariance(D, f, 0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(autocovariance(D, f, 1) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(autocovariance(D, f, 2) == doctest::Approx(0.02).epsilon(1e-12));
  CHECK_THROWS_AS(autocovariance(D, f, -1), DomainError);
}

TEST_CASE("autocovariance matches the brute-force kernel power") {
  RngStream rng(301, 0);
  for (int rep = 0; rep < 4; ++rep) {
    const ReversibleKernel K = vbtest::random_reversible(9, rng);
    const SpectralDecomposition D = eigendecompose(K);
    const Functional f = make_functional(K, vbtest::random_vector(9, rng));
    for (long k : {0L, 1L, 2L, 5L, 12L, 20L}) {
      // <h0, P^k h0>_pi computed directly from the matrix power.
      const Eigen::MatrixXd Pk = (k == 0)
                                     ? Eigen::MatrixXd::Identity(9, 9)
                                     : kernel_power(K, static_cast<int>(k));
      const double direct =
          (K.pi.array() * f.centered.array() * (Pk * f.centered).array())
              .sum();
      CHECK(autocovariance(D, f, k) == doctest::Approx(direct).epsilon(1e-10));
    }
  }
}

TEST_CASE("finite-horizon variance matches the worked value at n=100") {
  const ReversibleKernel K = two_state_base();
  const SpectralDecomposition D = eigendecompose(K);
  const Functional f = worked_functional(K);
  CHECK(finite_n_variance(D, f, 100) ==
        doctest::Approx(2.4395061728395064).epsilon(1e-12));
  CHECK(finite_n_variance(D, f, 1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(finite_n_variance(D, f, 0), DomainError);
}

TEST_CASE("finite-horizon variance agrees with the O(n) reference sum") {
  // Exercises both evaluation branches: the closed form away from 1 and the
  // direct averaged sum very close to 1.
  for (double lambda : {-0.8, -0.3, 0.1, 0.6, 0.99, 1.0 - 1e-6, 1.0 - 1e-8}) {
    const ReversibleKernel K = uniform_two_state(lambda);
    const SpectralDecomposition D = eigendecompose(K);
    Eigen::VectorXd h(2);
    h << 1.0, -1.0;  // eigenfunction, weight 1
    const Functional f = make_functional(K, h);
    for (long n : {2L, 17L, 500L}) {
      const double expected = cesaro_reference(1.0, lambda, n);
      CHECK(finite_n_variance(D, f, n) ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("identity directions make the exact variance infinite") {
  Eigen::VectorXd pi(3);
  pi.setConstant(1.0 / 3.0);
  const ReversibleKernel K = from_matrix(Eigen::MatrixXd::Identity(3, 3), pi);
  const SpectralDecomposition D = eigendecompose(K);
  Eigen::VectorXd h(3);
  h << 1.0, -1.0, 0.0;
  const Functional f = make_functional(K, h);

  const AsymptoticVariance v = asymptotic_variance_exact(D, f);
  CHECK(v.infinite);
  CHECK(v.value == std::numeric_limits<double>::infinity());

  // The finite-horizon variance grows linearly: var_pi * n.
  CHECK(finite_n_variance(D, f, 10) ==
        doctest::Approx(10.0 * f.var_pi).epsilon(1e-12));
  CHECK(finite_n_variance(D, f, 1000) ==
        doctest::Approx(1000.0 * f.var_pi).epsilon(1e-12));
}

TEST_CASE("finite-horizon variance is nondecreasing for positive kernels") {
  RngStream rng(302, 0);
  for (int rep = 0; rep < 5; ++rep) {
    const ReversibleKernel B =
        binomial_base(vbtest::random_reversible(10, rng));
    const SpectralDecomposition D = eigendecompose(B);
    const Functional f = make_functional(B, vbtest::random_vector(10, rng));
    double prev = 0.0;
    for (long n : {1L, 2L, 5L, 10L, 100L, 1000L}) {
      const double value = finite_n_variance(D, f, n);
      CHECK(value >= prev - 1e-12 * (1.0 + std::abs(value)));
      prev = value;
    }
  }
}

TEST_CASE("finite-horizon variance converges to the exact value") {
  RngStream rng(303, 0);
  const ReversibleKernel K = vbtest::random_reversible(8, rng);
  const SpectralDecomposition D = eigendecompose(K);
  const Functional f = make_functional(K, vbtest::random_vector(8, rng));
  const double v = asymptotic_variance_exact(D, f).value;
  CHECK(std::abs(finite_n_variance(D, f, 1000000) - v) <= 1e-3 * (1.0 + v));
}

TEST_CASE("variance_bound_K evaluates and guards the unit gap") {
  CHECK(variance_bound_K(0.1) == doctest::Approx(2.0 / 0.9).epsilon(1e-12));
  CHECK(variance_bound_K(0.99) == doctest::Approx(200.0).epsilon(1e-12));
  CHECK(variance_bound_K(-1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(variance_bound_K(1.0), LambdaAtOne);
  CHECK_THROWS_AS(variance_bound_K(1.5), LambdaAtOne);
}

TEST_CASE("the exact variance respects the two-sided spectral bounds") {
  RngStream rng(304, 0);
  for (int rep = 0; rep < 8; ++rep) {
    const ReversibleKernel K = vbtest::random_reversible(12, rng);
    const SpectralDecomposition D = eigendecompose(K);
    const Classification C = classify(D);
    REQUIRE(C.variance_bounding);
    const Functional f = make_functional(K, vbtest::random_vector(12, rng));
    const double v = asymptotic_variance_exact(D, f).value;
    CHECK(v <= C.K_bound * f.var_pi + 1e-9);
    const double lower = (1.0 + C.lambda_min) / (1.0 - C.lambda_min);
    CHECK(v >= lower * f.var_pi - 1e-9);
  }
}

TEST_CASE("variance_report bundles consistent fields") {
  const ReversibleKernel K = two_state_base();
  const SpectralDecomposition D = eigendecompose(K);
  const Functional f = worked_functional(K);
  const VarianceReport rep = variance_report(D, f, {1, 100, 10000});

  CHECK(rep.var_pi == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rep.v_exact.value == doctest::Approx(22.0 / 9.0).epsilon(1e-12));
  CHECK(rep.ratio == doctest::Approx(11.0 / 9.0).epsilon(1e-12));

  REQUIRE(rep.v_finite_n.size() == 3);
  CHECK(rep.v_finite_n[0].first == 1);
  CHECK(rep.v_finite_n[1].first == 100);
  CHECK(rep.v_finite_n[1].second ==
        doctest::Approx(2.4395061728395064).epsilon(1e-12));

  REQUIRE(rep.gamma.size() == 10);
  CHECK(rep.gamma[0] == doctest::Approx(rep.var_pi).epsilon(1e-12));
  CHECK(rep.gamma[1] == doctest::Approx(0.2).epsilon(1e-12));

  // The variance ratio always sits above the lower spectral bound.
  const Classification C = classify(D);
  CHECK(rep.ratio >=
        (1.0 + C.lambda_min) / (1.0 - C.lambda_min) - 1e-9);
}
