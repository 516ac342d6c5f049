#include "vbchain/functional.hpp"

#include "vbchain/errors.hpp"

namespace vbchain {

Functional make_functional(const Eigen::VectorXd& pi, const Eigen::VectorXd& h) {
  if (pi.size() != h.size()) {
    throw DimensionMismatch("functional length differs from state count");
  }
  Functional f;
  f.h = h;
  f.mean = pi.dot(h);
  f.centered = h.array() - f.mean;
  f.var_pi = pi.dot(f.centered.cwiseProduct(f.centered));
  return f;
}

Functional make_functional(const ReversibleKernel& K, const Eigen::VectorXd& h) {
  return make_functional(K.pi, h);
}

}  // namespace vbchain
