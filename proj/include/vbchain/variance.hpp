#pragma once

#include <utility>
#include <vector>

#include "vbchain/functional.hpp"
#include "vbchain/spectral.hpp"

namespace vbchain {

// Asymptotic variance of the time-average estimator.  `infinite` is set when
// spectral weight above 1e-12 sits on an eigenvalue within 1e-9 of 1; the
// value is then +inf.
struct AsymptoticVariance {
  double value = 0.0;
  bool infinite = false;
};

struct VarianceReport {
  double var_pi = 0.0;
  AsymptoticVariance v_exact;
  std::vector<std::pair<long, double>> v_finite_n;  // (horizon, Var(S_n)/n)
  double ratio = 0.0;                               // v_exact / var_pi
  std::vector<double> gamma;                        // autocovariance prefix
};

// v = sum_i w_i (1 + lambda_i) / (1 - lambda_i).
AsymptoticVariance asymptotic_variance_exact(const SpectralDecomposition& D,
                                             const Functional& h);

// gamma_k = sum_i w_i lambda_i^k; gamma_0 is the stationary variance.
// Throws DomainError for k < 0.
double autocovariance(const SpectralDecomposition& D, const Functional& h,
                      long k);

// Exact finite-horizon variance (1/n) Var(sum of n h-values along the
// stationary chain) = gamma_0 + 2 sum_{k=1}^{n-1} (1 - k/n) gamma_k,
// evaluated per eigenvalue in closed form.  Throws DomainError for n < 1.
double finite_n_variance(const SpectralDecomposition& D, const Functional& h,
                         long n);

// K = 2 / (1 - Lambda); the exact variance never exceeds K * var_pi.
// Throws LambdaAtOne when Lambda >= 1.
double variance_bound_K(double Lambda);

// Bundles the exact variance, finite-horizon values at the requested
// horizons, the ratio to the stationary variance, and the first
// `gamma_len` autocovariances.
VarianceReport variance_report(const SpectralDecomposition& D,
                               const Functional& h,
                               const std::vector<long>& horizons,
                               int gamma_len = 10);

}  // namespace vbchain
