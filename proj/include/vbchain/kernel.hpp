#pragma once

#include <Eigen/Dense>
#include <optional>

namespace vbchain {

struct KernelOptions {
  // Maximum allowed detailed-balance residual
  //   max_{i,j} |pi_i P_ij - pi_j P_ji|
  // before from_matrix rejects the kernel as NotReversible.
  double db_tolerance = 1e-10;
};

// A row-stochastic matrix P together with a stationary distribution pi that
// satisfies detailed balance with respect to P.  Instances are only created
// through the factory functions below, which validate the pair.
struct ReversibleKernel {
  Eigen::MatrixXd P;
  Eigen::VectorXd pi;
  // Achieved residual max_{i,j} |pi_i P_ij - pi_j P_ji|.
  double db_residual = 0.0;

  Eigen::Index size() const { return P.rows(); }
};

// Joint distribution p(x, y) on a finite grid, used to build two-component
// Gibbs samplers marginalized onto the first coordinate.
struct JointDistribution {
  Eigen::MatrixXd p;
};

// Validates P (square, n >= 2, entries >= 0, row sums within 1e-12 of 1),
// obtains pi (given and checked, or solved for), and checks detailed balance
// within opts.db_tolerance.  Throws NonStochastic / NonPositivePi /
// NotReversible / DimensionMismatch / DomainError.
ReversibleKernel from_matrix(const Eigen::MatrixXd& P,
                             std::optional<Eigen::VectorXd> pi = std::nullopt,
                             const KernelOptions& opts = {});

// Solves pi P = pi, pi >= 0, sum pi = 1 for a general row-stochastic P.
// Throws NonUniqueStationary when the eigenvalue-1 eigenspace has dimension
// greater than one (tolerance 1e-8 on the singular values of P^T - I), and
// NoConvergence when the solution fails ||pi P - pi||_inf <= 1e-12.
Eigen::VectorXd stationary_solve(const Eigen::MatrixXd& P);

// a I + (1 - a) P with 0 <= a < 1; shares pi with K.  Eigenvalues map as
// lambda -> a + (1 - a) lambda.  Throws BadMixtureWeight.
ReversibleKernel lazy_mixture(const ReversibleKernel& K, double a);

// (I + P) / 2; every eigenvalue of the result is >= 0.
ReversibleKernel binomial_base(const ReversibleKernel& K);

// Exact k-step transition table P^k for integer k >= 1 (throws DomainError
// otherwise).  Used as a brute-force oracle for autocovariances.
Eigen::MatrixXd kernel_power(const ReversibleKernel& K, int k);

// Pair of birth-death kernels on the window {-N, ..., N} (size 2N + 1,
// index m maps to m + N) sharing a stationary law with geometric tails
// (weight 1 at the origin, 1.5 * 2^{-|m|} elsewhere -- the unique law that
// balances the pinned drift rates).  The first kernel moves toward the
// origin with probability 2/3 and away with probability 1/3, holding at the
// window edges with the excess; the second proposes +/-1 with probability
// 1/2 each and accepts by the stationary-ratio rule.  The first dominates
// the second off-diagonal while mixing strictly slower on symmetric
// functionals.  Requires N >= 2 (throws WindowTooSmall).
std::pair<ReversibleKernel, ReversibleKernel> build_example9(int N);

// Two-component Gibbs sampler for joint law p(x, y), marginalized onto x:
//   P = A B^T with A_xy = p(x,y)/p(x,.), B_xy = p(x,y)/p(.,y).
// The Gram structure makes every eigenvalue nonnegative.  Throws
// DomainError (invalid joint) and DegenerateMarginal (a zero x-marginal).
ReversibleKernel build_data_augmentation(const JointDistribution& joint);

// True when the directed support graph of P is strongly connected.
bool is_irreducible_graph(const Eigen::MatrixXd& P);

namespace detail {
// Power iteration fallback used by stationary_solve for large n.
Eigen::VectorXd stationary_solve_power(const Eigen::MatrixXd& P);
}  // namespace detail

}  // namespace vbchain
