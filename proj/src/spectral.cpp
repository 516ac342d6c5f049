#include "vbchain/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace detail {

void jacobi_eigh(Eigen::MatrixXd& A, Eigen::MatrixXd& V) {
  const Eigen::Index n = A.rows();
  V = Eigen::MatrixXd::Identity(n, n);
  if (n < 2) return;

  auto off_norm = [&A, n]() {
    double sum = 0.0;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        sum += 2.0 * A(p, q) * A(p, q);
      }
    }
    return std::sqrt(sum);
  };

  for (int sweep = 0; sweep < 100; ++sweep) {
    if (off_norm() <= 1e-12) return;
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        // Entries this small cannot move the off-diagonal norm past the
        // stopping threshold; rotating on them risks 0/0 in theta.
        if (std::abs(apq) < 1e-300) {
          A(p, q) = A(q, p) = 0.0;
          continue;
        }
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = A(k, p);
          const double akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = A(p, k);
          const double aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = V(k, p);
          const double vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > 1e-12) {
    throw NoConvergence("Jacobi sweeps exhausted before off-diagonal collapse");
  }
}

}  // namespace detail

Eigen::MatrixXd symmetrize(const ReversibleKernel& K) {
  const Eigen::Index n = K.size();
  if (K.pi.size() != n) {
    throw DimensionMismatch("stationary vector length differs from matrix size");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(K.pi[i] > 0.0)) {
      throw ZeroPiEntry("stationary law must be strictly positive");
    }
  }
  const Eigen::VectorXd root = K.pi.cwiseSqrt();
  Eigen::MatrixXd S(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      S(i, j) = root[i] * K.P(i, j) / root[j];
    }
  }
  const double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-10) {
    throw NotReversible("symmetrized kernel is asymmetric beyond 1e-10");
  }
  return S;
}

SpectralDecomposition eigendecompose(const ReversibleKernel& K) {
  const Eigen::Index n = K.size();
  const Eigen::MatrixXd S = symmetrize(K);
  const Eigen::MatrixXd Ssym = 0.5 * (S + S.transpose());

  // sqrt(pi) is the eigenvalue-1 eigenvector of Ssym; reflect it onto e_0
  // so the mean-zero subspace becomes the trailing (n-1) coordinates.
  Eigen::VectorXd u = K.pi.cwiseSqrt();
  u /= u.norm();
  Eigen::VectorXd v = u;
  v[0] += 1.0;  // u_0 > 0, so no cancellation
  const double vtv = v.squaredNorm();
  const Eigen::MatrixXd H =
      Eigen::MatrixXd::Identity(n, n) - (2.0 / vtv) * (v * v.transpose());

  const Eigen::MatrixXd B = H * Ssym * H;
  Eigen::MatrixXd C = B.bottomRightCorner(n - 1, n - 1);
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::MatrixXd V;
  detail::jacobi_eigh(C, V);

  SpectralDecomposition D;
  D.pi = K.pi;
  D.eigenvalues.resize(n - 1);
  D.eigenvectors.resize(n, n - 1);
  D.residual = 0.0;

  const Eigen::VectorXd root = K.pi.cwiseSqrt();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n - 1));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&C](Eigen::Index a, Eigen::Index b) { return C(a, a) > C(b, b); });

  for (Eigen::Index col = 0; col < n - 1; ++col) {
    const Eigen::Index src = order[static_cast<std::size_t>(col)];
    const double lambda = C(src, src);
    Eigen::VectorXd embedded = Eigen::VectorXd::Zero(n);
    embedded.tail(n - 1) = V.col(src);
    const Eigen::VectorXd z = H * embedded;
    D.residual = std::max(D.residual,
                          (Ssym * z - lambda * z).cwiseAbs().maxCoeff());
    D.eigenvalues[col] = lambda;
    D.eigenvectors.col(col) = z.cwiseQuotient(root);
  }

  if (D.residual > 1e-9) {
    throw NoConvergence("eigen residual exceeds 1e-9");
  }
  for (Eigen::Index i = 0; i < n - 1; ++i) {
    double& lambda = D.eigenvalues[i];
    if (lambda > 1.0) {
      if (lambda > 1.0 + 1e-9) {
        throw NoConvergence("eigenvalue strays above 1 beyond 1e-9");
      }
      lambda = 1.0;
    } else if (lambda < -1.0) {
      if (lambda < -1.0 - 1e-9) {
        throw NoConvergence("eigenvalue strays below -1 beyond 1e-9");
      }
      lambda = -1.0;
    }
  }
  return D;
}

Classification classify(const SpectralDecomposition& D,
                        const ClassifyOptions& opts) {
  Classification c;
  c.thresholds = opts;
  c.Lambda = D.eigenvalues[0];
  c.lambda_min = D.eigenvalues[D.eigenvalues.size() - 1];
  c.variance_bounding = (c.Lambda <= 1.0 - opts.vb_threshold);
  c.K_bound = c.variance_bounding
                  ? 2.0 / (1.0 - c.Lambda)
                  : std::numeric_limits<double>::infinity();
  c.geometrically_ergodic =
      std::max(std::abs(c.Lambda), std::abs(c.lambda_min)) <=
      1.0 - opts.vb_threshold;
  c.positive = (c.lambda_min >= -opts.pos_tol);
  c.near_periodic = (c.lambda_min < -1.0 + opts.period_tol);
  c.reducible = (c.Lambda > 1.0 - opts.reducible_tol);
  return c;
}

Eigen::VectorXd spectral_weights(const SpectralDecomposition& D,
                                 const Functional& h) {
  const Eigen::Index n = D.pi.size();
  if (h.h.size() != n) {
    throw DimensionMismatch("functional length differs from state count");
  }
  // Recenter against this decomposition's pi so the weights always satisfy
  // the Parseval identity sum(w) = Var_pi(h).
  const double mean = D.pi.dot(h.h);
  const Eigen::VectorXd centered = h.h.array() - mean;
  const Eigen::Index m = D.eigenvalues.size();
  Eigen::VectorXd w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double inner = D.pi.dot(centered.cwiseProduct(D.eigenvectors.col(i)));
    w[i] = inner * inner;
  }
  return w;
}

}  // namespace vbchain
