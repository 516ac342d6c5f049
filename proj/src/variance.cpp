#include "vbchain/variance.hpp"

#include <cmath>
#include <limits>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace {

constexpr double kWeightFloor = 1e-12;
constexpr double kUnitGap = 1e-9;

double ipow(double base, long e) {
  double r = 1.0;
  double b = base;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

// (1/n) Var(S_n) contribution of a unit-weight eigenvalue:
//   1 + 2 sum_{k=1}^{n-1} (1 - k/n) lambda^k
//   = (1+lambda)/(1-lambda) - 2 lambda (1 - lambda^n) / (n (1-lambda)^2).
double per_eigenvalue_finite_n(double lambda, long n) {
  if (std::abs(1.0 - lambda) < 1e-7) {
    // The closed form divides by (1-lambda)^2; sum directly instead.
    double acc = 1.0;
    double lk = 1.0;
    for (long k = 1; k < n; ++k) {
      lk *= lambda;
      acc += 2.0 * (1.0 - static_cast<double>(k) / static_cast<double>(n)) * lk;
    }
    return acc;
  }
  double one_minus_pow;
  if (lambda > 0.5) {
    one_minus_pow = -std::expm1(static_cast<double>(n) * std::log(lambda));
  } else {
    one_minus_pow = 1.0 - ipow(lambda, n);
  }
  const double gap = 1.0 - lambda;
  return (1.0 + lambda) / gap -
         2.0 * lambda * one_minus_pow / (static_cast<double>(n) * gap * gap);
}

}  // namespace

AsymptoticVariance asymptotic_variance_exact(const SpectralDecomposition& D,
                                             const Functional& h) {
  const Eigen::VectorXd w = spectral_weights(D, h);
  AsymptoticVariance out;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    const double lambda = D.eigenvalues[i];
    if (lambda > 1.0 - kUnitGap) {
      if (w[i] > kWeightFloor) {
        out.infinite = true;
      }
      // Negligible weight this close to 1 would otherwise inject 0 * inf.
      continue;
    }
    out.value += w[i] * (1.0 + lambda) / (1.0 - lambda);
  }
  if (out.infinite) {
    out.value = std::numeric_limits<double>::infinity();
  }
  return out;
}

double autocovariance(const SpectralDecomposition& D, const Functional& h,
                      long k) {
  if (k < 0) {
    throw DomainError("autocovariance lag must be >= 0");
  }
  const Eigen::VectorXd w = spectral_weights(D, h);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    acc += w[i] * ipow(D.eigenvalues[i], k);
  }
  return acc;
}

double finite_n_variance(const SpectralDecomposition& D, const Functional& h,
                         long n) {
  if (n < 1) {
    throw DomainError("horizon must be >= 1");
  }
  const Eigen::VectorXd w = spectral_weights(D, h);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w[i] == 0.0) continue;
    acc += w[i] * per_eigenvalue_finite_n(D.eigenvalues[i], n);
  }
  return acc;
}

double variance_bound_K(double Lambda) {
  if (Lambda >= 1.0) {
    throw LambdaAtOne("variance bound needs Lambda < 1");
  }
  return 2.0 / (1.0 - Lambda);
}

VarianceReport variance_report(const SpectralDecomposition& D,
                               const Functional& h,
                               const std::vector<long>& horizons,
                               int gamma_len) {
  VarianceReport rep;
  const double mean = D.pi.dot(h.h);
  const Eigen::VectorXd centered = h.h.array() - mean;
  rep.var_pi = D.pi.dot(centered.cwiseProduct(centered));
  rep.v_exact = asymptotic_variance_exact(D, h);
  for (long n : horizons) {
    rep.v_finite_n.emplace_back(n, finite_n_variance(D, h, n));
  }
  rep.ratio = (rep.var_pi > 0.0) ? rep.v_exact.value / rep.var_pi : 0.0;
  rep.gamma.reserve(static_cast<std::size_t>(std::max(gamma_len, 0)));
  for (int k = 0; k < gamma_len; ++k) {
    rep.gamma.push_back(autocovariance(D, h, k));
  }
  return rep;
}

}  // namespace vbchain
