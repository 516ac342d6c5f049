#pragma once

#include <Eigen/Dense>

#include "vbchain/functional.hpp"
#include "vbchain/kernel.hpp"

namespace vbchain {

// Eigenpairs of the symmetrized kernel restricted to the mean-zero subspace:
// n - 1 eigenvalues in [-1, 1] (descending) with eigenvectors that are
// orthonormal under the pi-weighted inner product and orthogonal to
// constants.  The stationary law travels along for weight computations.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;   // length n - 1, sorted descending
  Eigen::MatrixXd eigenvectors;  // n x (n - 1); column i pairs with value i
  Eigen::VectorXd pi;
  double residual = 0.0;  // max_i ||S z_i - lambda_i z_i||_inf before clamping
};

struct ClassifyOptions {
  double vb_threshold = 1e-9;
  double pos_tol = 1e-10;
  double period_tol = 1e-3;
  double reducible_tol = 1e-8;
};

struct Classification {
  double Lambda = 0.0;      // sup of the mean-zero spectrum
  double lambda_min = 0.0;  // inf of the mean-zero spectrum
  double K_bound = 0.0;     // 2 / (1 - Lambda), +inf when not variance bounding
  bool variance_bounding = false;
  bool geometrically_ergodic = false;
  bool positive = false;
  bool near_periodic = false;
  bool reducible = false;
  ClassifyOptions thresholds;
};

// S_ij = sqrt(pi_i / pi_j) P_ij, the similarity transform that makes a
// reversible kernel symmetric.  Throws ZeroPiEntry when some pi_i <= 0 and
// NotReversible when ||S - S^T||_inf exceeds 1e-10.
Eigen::MatrixXd symmetrize(const ReversibleKernel& K);

// Symmetrizes, deflates the known unit eigenvector sqrt(pi) by an explicit
// orthogonal reflection, runs cyclic Jacobi sweeps on the remaining
// (n-1) x (n-1) block, and maps eigenvectors back.  Throws NoConvergence
// when the sweep cap is hit with residual > 1e-9 or an eigenvalue strays
// more than 1e-9 outside [-1, 1].
SpectralDecomposition eigendecompose(const ReversibleKernel& K);

Classification classify(const SpectralDecomposition& D,
                        const ClassifyOptions& opts = {});

// w_i = <h - pi(h), v_i>_pi^2.  The weights sum to Var_pi(h).  Throws
// DimensionMismatch.
Eigen::VectorXd spectral_weights(const SpectralDecomposition& D,
                                 const Functional& h);

namespace detail {
// Cyclic Jacobi diagonalization of a symmetric matrix.  On return A is
// diagonal (eigenvalues, unsorted) and V holds the eigenvectors in columns.
// Converges when the off-diagonal Frobenius norm drops below 1e-12; throws
// NoConvergence after 100 sweeps.
void jacobi_eigh(Eigen::MatrixXd& A, Eigen::MatrixXd& V);
}  // namespace detail

}  // namespace vbchain
