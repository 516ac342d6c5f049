#pragma once

#include <Eigen/Dense>

#include "vbchain/kernel.hpp"

namespace vbchain {

// Sub-probability proposal table: nonnegative entries, each row summing to
// at most 1 (within 1e-12); the deficit becomes holding mass in the built
// kernel.
struct ProposalTable {
  Eigen::MatrixXd q;
};

// Accept-reject kernel for target weights t (normalized internally) with
// proposal q:
//   M(x, y) = min(q(x, y), (t_y / t_x) q(y, x))   for y != x,
//   M(x, x) = 1 - sum of the off-diagonal row.
// When q rows sum to 1 this is the usual accept-reject chain; sub-probability
// rows convert the deficit to holding.  Throws NonPositiveTarget and
// RowSumExceedsOne (invalid q, or an off-diagonal row exceeding 1 beyond
// round-off).
ReversibleKernel build_sub_mh(const Eigen::VectorXd& t, const ProposalTable& q,
                              const KernelOptions& opts = {});

// Entrywise c * q for c in (0, 1]; throws BadScale.  Building from the
// scaled table equals the lazy mixture with weight 1 - c.
ProposalTable scale_proposal(const ProposalTable& q, double c);

}  // namespace vbchain
