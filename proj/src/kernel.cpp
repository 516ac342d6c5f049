#include "vbchain/kernel.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <cmath>
#include <utility>
#include <vector>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_row_stochastic(const Eigen::MatrixXd& P) {
  if (P.rows() != P.cols()) {
    throw DimensionMismatch("transition matrix must be square");
  }
  const Eigen::Index n = P.rows();
  if (n < 2) {
    throw DomainError("transition matrix needs at least two states");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!(P(i, j) >= 0.0)) {
        throw NonStochastic("negative or NaN transition probability");
      }
      row_sum += P(i, j);
    }
    if (std::abs(row_sum - 1.0) > kRowSumTol) {
      throw NonStochastic("row sum deviates from 1 beyond 1e-12");
    }
  }
}

double db_residual_of(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
  const Eigen::Index n = P.rows();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      worst = std::max(worst, std::abs(pi[i] * P(i, j) - pi[j] * P(j, i)));
    }
  }
  return worst;
}

}  // namespace

ReversibleKernel from_matrix(const Eigen::MatrixXd& P,
                             std::optional<Eigen::VectorXd> pi,
                             const KernelOptions& opts) {
  check_row_stochastic(P);
  const Eigen::Index n = P.rows();

  Eigen::VectorXd stationary;
  if (pi.has_value()) {
    stationary = std::move(*pi);
    if (stationary.size() != n) {
      throw DimensionMismatch("stationary vector length differs from matrix size");
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(stationary[i] > 0.0)) {
        throw NonPositivePi("stationary probabilities must be strictly positive");
      }
      total += stationary[i];
    }
    if (std::abs(total - 1.0) > kRowSumTol) {
      throw NonPositivePi("stationary probabilities must sum to 1 within 1e-12");
    }
  } else {
    stationary = stationary_solve(P);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!(stationary[i] > 0.0)) {
        throw NonPositivePi("solved stationary law has a zero entry");
      }
    }
  }

  ReversibleKernel K;
  K.P = P;
  K.pi = std::move(stationary);
  K.db_residual = db_residual_of(K.P, K.pi);
  if (K.db_residual > opts.db_tolerance) {
    throw NotReversible("detailed balance residual exceeds tolerance");
  }
  return K;
}

bool is_irreducible_graph(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  auto reaches_all = [&](bool forward) {
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    std::vector<Eigen::Index> stack{0};
    seen[0] = 1;
    Eigen::Index count = 1;
    while (!stack.empty()) {
      const Eigen::Index v = stack.back();
      stack.pop_back();
      for (Eigen::Index w = 0; w < n; ++w) {
        const double edge = forward ? P(v, w) : P(w, v);
        if (edge > 0.0 && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          ++count;
          stack.push_back(w);
        }
      }
    }
    return count == n;
  };
  return reaches_all(true) && reaches_all(false);
}

namespace detail {

Eigen::VectorXd stationary_solve_power(const Eigen::MatrixXd& P) {
  const Eigen::Index n = P.rows();
  Eigen::VectorXd pi = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int iter = 0; iter < 200000; ++iter) {
    Eigen::VectorXd next = P.transpose() * pi;
    next /= next.sum();
    const double delta = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
    if (delta < 1e-16) break;
  }
  const double residual = (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (residual > 1e-12) {
    throw NoConvergence("power iteration failed to reach a stationary law");
  }
  return pi;
}

}  // namespace detail

Eigen::VectorXd stationary_solve(const Eigen::MatrixXd& P) {
  check_row_stochastic(P);
  const Eigen::Index n = P.rows();

  if (n > 2000) {
    // SVD cost grows too fast here; verify uniqueness through the support
    // graph instead and fall back to power iteration.
    if (!is_irreducible_graph(P)) {
      throw NonUniqueStationary("support graph is not strongly connected");
    }
    return detail::stationary_solve_power(P);
  }

  const Eigen::MatrixXd A =
      P.transpose() - Eigen::MatrixXd::Identity(n, n);
  Eigen::BDCSVD<Eigen::MatrixXd> svd(A);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::Index null_dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] <= 1e-8) ++null_dim;
  }
  if (null_dim > 1) {
    throw NonUniqueStationary("eigenvalue-1 eigenspace has dimension > 1");
  }

  // Least squares on [A; 1^T] pi = [0; 1] pins the normalization directly.
  Eigen::MatrixXd stacked(n + 1, n);
  stacked.topRows(n) = A;
  stacked.bottomRows(1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs[n] = 1.0;
  Eigen::VectorXd pi = stacked.colPivHouseholderQr().solve(rhs);

  for (Eigen::Index i = 0; i < n; ++i) {
    if (pi[i] < 0.0) {
      if (pi[i] < -1e-10) {
        throw NoConvergence("stationary solve produced a negative probability");
      }
      pi[i] = 0.0;
    }
  }
  pi /= pi.sum();

  const double residual = (P.transpose() * pi - pi).cwiseAbs().maxCoeff();
  if (residual > 1e-12) {
    throw NoConvergence("stationary residual exceeds 1e-12");
  }
  return pi;
}

ReversibleKernel lazy_mixture(const ReversibleKernel& K, double a) {
  if (!(a >= 0.0 && a < 1.0)) {
    throw BadMixtureWeight("holding weight must lie in [0, 1)");
  }
  const Eigen::Index n = K.size();
  ReversibleKernel out;
  out.P = (1.0 - a) * K.P;
  out.P.diagonal().array() += a;
  out.pi = K.pi;
  out.db_residual = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.db_residual = std::max(
          out.db_residual,
          std::abs(out.pi[i] * out.P(i, j) - out.pi[j] * out.P(j, i)));
    }
  }
  return out;
}

ReversibleKernel binomial_base(const ReversibleKernel& K) {
  return lazy_mixture(K, 0.5);
}

Eigen::MatrixXd kernel_power(const ReversibleKernel& K, int k) {
  if (k < 1) {
    throw DomainError("kernel power requires k >= 1");
  }
  const Eigen::Index n = K.size();
  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd base = K.P;
  int e = k;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

std::pair<ReversibleKernel, ReversibleKernel> build_example9(int N) {
  if (N < 2) {
    throw WindowTooSmall("window half-width must be at least 2");
  }
  const Eigen::Index n = 2 * static_cast<Eigen::Index>(N) + 1;
  const auto idx = [N](int m) { return static_cast<Eigen::Index>(m + N); };

  // Unnormalized weights: 1 at the origin and 1.5 * 2^{-|m|} elsewhere.
  // These are the balance weights of the drift kernel (ratio 3/4 between
  // origin and its neighbors, 1/2 along the tails) and are exact dyadics,
  // so both kernels satisfy detailed balance to a few ulp.
  Eigen::VectorXd mu(n);
  for (int m = -N; m <= N; ++m) {
    mu[idx(m)] = (m == 0) ? 1.0 : 1.5 * std::ldexp(1.0, -std::abs(m));
  }
  Eigen::VectorXd pi = mu / mu.sum();

  // Drift kernel: rate 2/3 toward the origin, 1/3 away, excess held at the
  // window edges; the origin splits evenly.
  Eigen::MatrixXd P1 = Eigen::MatrixXd::Zero(n, n);
  for (int m = -N; m <= N; ++m) {
    const Eigen::Index i = idx(m);
    double off = 0.0;
    if (m > 0) {
      P1(i, idx(m - 1)) = 2.0 / 3.0;
      off += 2.0 / 3.0;
      if (m < N) {
        P1(i, idx(m + 1)) = 1.0 / 3.0;
        off += 1.0 / 3.0;
      }
    } else if (m < 0) {
      P1(i, idx(m + 1)) = 2.0 / 3.0;
      off += 2.0 / 3.0;
      if (m > -N) {
        P1(i, idx(m - 1)) = 1.0 / 3.0;
        off += 1.0 / 3.0;
      }
    } else {
      P1(i, idx(-1)) = 0.5;
      P1(i, idx(1)) = 0.5;
      off = 1.0;
    }
    P1(i, i) = 1.0 - off;
  }

  // Accept-reject kernel for the same law: propose +/-1 with probability
  // 1/2 each, accept with the stationary ratio capped at 1; proposal mass
  // leaving the window is held.
  Eigen::MatrixXd P2 = Eigen::MatrixXd::Zero(n, n);
  for (int m = -N; m <= N; ++m) {
    const Eigen::Index i = idx(m);
    double off = 0.0;
    for (int d : {-1, 1}) {
      const int t = m + d;
      if (t < -N || t > N) continue;
      const double prob = 0.5 * std::min(1.0, mu[idx(t)] / mu[i]);
      P2(i, idx(t)) = prob;
      off += prob;
    }
    P2(i, i) = 1.0 - off;
  }

  KernelOptions strict;
  strict.db_tolerance = 1e-12;
  return {from_matrix(P1, pi, strict), from_matrix(P2, pi, strict)};
}

ReversibleKernel build_data_augmentation(const JointDistribution& joint) {
  const Eigen::MatrixXd& p = joint.p;
  if (p.rows() < 1 || p.cols() < 1) {
    throw DomainError("joint table must be non-empty");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (!(p(i, j) >= 0.0)) {
        throw DomainError("joint probabilities must be nonnegative");
      }
      total += p(i, j);
    }
  }
  if (std::abs(total - 1.0) > kRowSumTol) {
    throw DomainError("joint probabilities must sum to 1 within 1e-12");
  }

  const Eigen::VectorXd row_mass = p.rowwise().sum();
  const Eigen::VectorXd col_mass = p.colwise().sum();
  for (Eigen::Index i = 0; i < row_mass.size(); ++i) {
    if (!(row_mass[i] > 0.0)) {
      throw DegenerateMarginal("x-marginal has a zero entry");
    }
  }

  // P = A B^T where A holds p(y | x) in rows and B holds p(x | y) in rows;
  // the Gram structure forces a nonnegative spectrum.
  const Eigen::Index nx = p.rows();
  const Eigen::Index ny = p.cols();
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(nx, nx);
  for (Eigen::Index y = 0; y < ny; ++y) {
    if (!(col_mass[y] > 0.0)) continue;
    for (Eigen::Index i = 0; i < nx; ++i) {
      if (p(i, y) == 0.0) continue;
      const double a = p(i, y) / row_mass[i];
      for (Eigen::Index j = 0; j < nx; ++j) {
        P(i, j) += a * (p(j, y) / col_mass[y]);
      }
    }
  }

  Eigen::VectorXd pi = row_mass / row_mass.sum();
  KernelOptions strict;
  strict.db_tolerance = 1e-12;
  return from_matrix(P, pi, strict);
}

}  // namespace vbchain
