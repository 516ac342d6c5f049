#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vbchain/functional.hpp"
#include "vbchain/kernel.hpp"
#include "vbchain/variance.hpp"

namespace vbchain {

// Exact asymptotic variances of one functional under the two kernels being
// compared.
struct VariancePair {
  std::string id;
  AsymptoticVariance v1;
  AsymptoticVariance v2;
};

// Result of the off-diagonal domination check "K1 assigns at least as much
// off-diagonal mass as K2 everywhere", plus the spectral and per-functional
// variance consequences when requested through ordering_report.
struct PeskunReport {
  bool dominates = false;
  // max over off-diagonal (i, j) of P2_ij - P1_ij when positive, else 0.
  double worst_violation = 0.0;
  std::pair<double, double> Lambda_pair{0.0, 0.0};
  std::vector<VariancePair> variance_pairs;
};

// Entrywise off-diagonal comparison; diagonals ignored.  Requires matching
// sizes (DimensionMismatch) and stationary laws within 1e-10
// (MismatchedStationary).  Fills only the domination fields.
PeskunReport dominates_off_diagonal(const ReversibleKernel& K1,
                                    const ReversibleKernel& K2);

// Runs the domination check, then fills Lambda_pair from the spectral module
// and variance_pairs from the variance module.  When domination holds,
// asserts Lambda_1 <= Lambda_2 + 1e-9 and v1 <= v2 + 1e-9 per functional
// (OrderingViolation signals an internal inconsistency, not bad input).
PeskunReport ordering_report(const ReversibleKernel& K1,
                             const ReversibleKernel& K2,
                             const std::vector<Functional>& hs);

// Deterministic batch of standard-normal-entry functionals (ids "h0",
// "h1", ...) for ordering reports.
std::vector<Functional> random_functionals(const ReversibleKernel& K,
                                           int count, std::uint64_t seed);

}  // namespace vbchain
