#include "vbchain/mh_finite.hpp"

#include <cmath>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace {

void check_proposal(const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) {
    throw DimensionMismatch("proposal table must be square");
  }
  const Eigen::Index n = q.rows();
  if (n < 2) {
    throw DomainError("proposal table needs at least two states");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(q(i, j) >= 0.0)) {
        throw RowSumExceedsOne("negative or NaN proposal probability");
      }
      row_sum += q(i, j);
    }
    if (row_sum > 1.0 + 1e-12) {
      throw RowSumExceedsOne("proposal row sum exceeds 1 beyond 1e-12");
    }
  }
}

}  // namespace

ReversibleKernel build_sub_mh(const Eigen::VectorXd& t, const ProposalTable& q,
                              const KernelOptions& opts) {
  check_proposal(q.q);
  const Eigen::Index n = q.q.rows();
  if (t.size() != n) {
    throw DimensionMismatch("target length differs from proposal size");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(t[i] > 0.0)) {
      throw NonPositiveTarget("target weights must be strictly positive");
    }
  }

  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double off = 0.0;
    for (Eigen::Index y = 0; y < n; ++y) {
      if (y == x) continue;
      // min(q_xy, (t_y/t_x) q_yx) is monotone in q entry-by-entry even in
      // floating point, which keeps the domination properties exact.
      M(x, y) = std::min(q.q(x, y), (t[y] / t[x]) * q.q(y, x));
      off += M(x, y);
    }
    double hold = 1.0 - off;
    if (hold < 0.0) {
      if (hold < -1e-12) {
        throw RowSumExceedsOne("off-diagonal acceptance mass exceeds 1");
      }
      hold = 0.0;
    }
    M(x, x) = hold;
  }

  Eigen::VectorXd pi = t / t.sum();
  KernelOptions strict = opts;
  strict.db_tolerance = std::min(opts.db_tolerance, 1e-12);
  return from_matrix(M, pi, strict);
}

ProposalTable scale_proposal(const ProposalTable& q, double c) {
  if (!(c > 0.0 && c <= 1.0)) {
    throw BadScale("proposal scale must lie in (0, 1]");
  }
  ProposalTable out;
  out.q = c * q.q;
  return out;
}

}  // namespace vbchain
