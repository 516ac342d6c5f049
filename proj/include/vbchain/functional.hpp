#pragma once

#include <Eigen/Dense>

#include "vbchain/kernel.hpp"

namespace vbchain {

// A real-valued function on the state space together with its mean and
// variance under a stationary law pi, plus the centered values used by the
// spectral-weight and variance routines.
struct Functional {
  Eigen::VectorXd h;
  double mean = 0.0;
  Eigen::VectorXd centered;
  double var_pi = 0.0;
};

// Centers h against pi.  Throws DimensionMismatch when lengths differ.
Functional make_functional(const Eigen::VectorXd& pi, const Eigen::VectorXd& h);

// Convenience overload using the kernel's stationary law.
Functional make_functional(const ReversibleKernel& K, const Eigen::VectorXd& h);

}  // namespace vbchain
