#pragma once

#include <string>

#include "vbchain/kernel.hpp"
#include "vbchain/mh_finite.hpp"

namespace vbchain {

// Kernel text format VBK1:
//   line 1:        the literal header VBK1
//   line 2:        the state count n
//   line 3:        n whitespace-separated decimals (pi)
//   lines 4..n+3:  the n rows of P
// Proposal format VBQ1 is identical minus the pi line.  All values are
// written with 17 significant digits so a write/read round trip reproduces
// doubles exactly.  Parsers reject trailing garbage; read_kernel re-runs the
// full kernel validation.

void write_kernel(const std::string& path, const ReversibleKernel& K);
ReversibleKernel read_kernel(const std::string& path,
                             const KernelOptions& opts = {});

void write_proposal(const std::string& path, const ProposalTable& q);
ProposalTable read_proposal(const std::string& path);

// Plain numeric file: whitespace-separated decimals, nothing else.  Used for
// functionals and target weights; the caller checks the length.
Eigen::VectorXd read_weights(const std::string& path);

// %.17g rendering used for every serialized double.
std::string format_double(double x);

}  // namespace vbchain
