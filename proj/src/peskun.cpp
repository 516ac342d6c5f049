#include "vbchain/peskun.hpp"

#include <cmath>

#include "vbchain/errors.hpp"
#include "vbchain/rng.hpp"
#include "vbchain/spectral.hpp"

namespace vbchain {

PeskunReport dominates_off_diagonal(const ReversibleKernel& K1,
                                    const ReversibleKernel& K2) {
  const Eigen::Index n = K1.size();
  if (K2.size() != n) {
    throw DimensionMismatch("kernels live on different state counts");
  }
  if ((K1.pi - K2.pi).cwiseAbs().maxCoeff() > 1e-10) {
    throw MismatchedStationary(
        "the off-diagonal order needs a common stationary law");
  }
  PeskunReport rep;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double deficit = K2.P(i, j) - K1.P(i, j);
      if (deficit > rep.worst_violation) {
        rep.worst_violation = deficit;
      }
    }
  }
  rep.dominates = (rep.worst_violation <= 1e-12);
  return rep;
}

PeskunReport ordering_report(const ReversibleKernel& K1,
                             const ReversibleKernel& K2,
                             const std::vector<Functional>& hs) {
  PeskunReport rep = dominates_off_diagonal(K1, K2);
  const SpectralDecomposition D1 = eigendecompose(K1);
  const SpectralDecomposition D2 = eigendecompose(K2);
  rep.Lambda_pair = {D1.eigenvalues[0], D2.eigenvalues[0]};

  int index = 0;
  for (const Functional& h : hs) {
    VariancePair pair;
    pair.id = "h" + std::to_string(index++);
    pair.v1 = asymptotic_variance_exact(D1, h);
    pair.v2 = asymptotic_variance_exact(D2, h);
    rep.variance_pairs.push_back(std::move(pair));
  }

  if (rep.dominates) {
    if (rep.Lambda_pair.first > rep.Lambda_pair.second + 1e-9) {
      throw OrderingViolation(
          "domination holds but the spectral suprema are not ordered");
    }
    for (const VariancePair& pair : rep.variance_pairs) {
      if (pair.v2.infinite) continue;
      if (pair.v1.infinite || pair.v1.value > pair.v2.value + 1e-9) {
        throw OrderingViolation(
            "domination holds but a variance pair is not ordered");
      }
    }
  }
  return rep;
}

std::vector<Functional> random_functionals(const ReversibleKernel& K,
                                           int count, std::uint64_t seed) {
  std::vector<Functional> out;
  out.reserve(static_cast<std::size_t>(count));
  const Eigen::Index n = K.size();
  for (int c = 0; c < count; ++c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    Eigen::VectorXd h(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      h[i] = rng.normal();
    }
    out.push_back(make_functional(K, h));
  }
  return out;
}

}  // namespace vbchain
