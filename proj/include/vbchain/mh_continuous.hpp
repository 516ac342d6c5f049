#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vbchain/rng.hpp"

namespace vbchain {

// Open interval of valid states; infinities mark unbounded sides.
struct Support {
  double lo;
  double hi;
  bool contains(double x) const { return x > lo && x < hi; }
};

// One-dimensional target described by its log density (finite inside the
// support) and optionally its log-density derivative for gradient-informed
// proposals.
struct Target {
  std::string name;
  std::function<double(double)> log_density;
  std::function<double(double)> dlog_density;  // empty when not C^1
  Support support;
};

Target laplace_target();         // t(x) proportional to exp(-|x|) on R
Target smooth_laplace_target();  // t(x) proportional to exp(-sqrt(1+x^2)) on R
Target half_cauchy_target();     // (2/pi) / (1+x^2) on (0, inf)
Target uniform_target(double lo, double hi);

enum class ProposalKind { kRandomWalk, kLangevin, kStateDependent };
enum class TransformKind { kNone, kLog, kPower };

struct Proposal {
  ProposalKind kind = ProposalKind::kRandomWalk;
  double scale = 1.0;  // random walk: increment standard deviation
  double delta = 1.0;  // Langevin: mean x + delta/2 * dlog t(x), sd delta
  double b = 1.0;      // state-dependent: sd x^{b/2} on (0, inf)
};

// Diagnostic change of variables for state-dependent chains: x -> log x when
// b = 2, x -> x^a with a = 1 - b/2 when 0 < b < 2, identity otherwise.
struct Transform {
  TransformKind kind = TransformKind::kNone;
  double a = 1.0;  // power exponent, meaningful for kPower only
};

struct SamplerSpec {
  Target target;
  Proposal proposal;
  Transform transform;
};

SamplerSpec make_random_walk_sampler(Target target, double scale);
SamplerSpec make_langevin_sampler(Target target, double delta);
// Picks the transform from b: log at b = 2, power a = 1 - b/2 for b < 2,
// none for b > 2.  The target must live on (0, inf).
SamplerSpec make_state_dependent_sampler(Target target, double b);

// Throws DomainError when a SamplerSpec violates its invariants (nonpositive
// scale/delta/b, transform inconsistent with b, missing gradient for
// Langevin, wrong support for state-dependent proposals).
void validate_spec(const SamplerSpec& spec);

// Log proposal density log q(x, y); the proposal families are all normal
// with state-dependent mean/sd.
double proposal_log_density(const SamplerSpec& spec, double x, double y);

double sample_proposal(const SamplerSpec& spec, double x, RngStream& rng);

struct StepResult {
  double x;
  bool accepted;
};

// One accept-reject transition from x.  Proposals outside the target support
// are rejected.  Throws InvalidState when x itself is outside.
StepResult mh_step(const SamplerSpec& spec, double x, RngStream& rng);

// Elementwise transform of a path of states; power/log transforms require
// strictly positive states (NonPositiveState).
std::vector<double> apply_transform(const SamplerSpec& spec,
                                    const std::vector<double>& states);

// Density of the one-step increment of the power-transformed state-dependent
// chain at base state x: the increment w = (x + x^{1-a} Z)^a - x^a of a
// standard normal Z has density
//   phi(z(w)) * (1 + w x^{-a})^{(1-a)/a} / a,
//   z(w) = x^a ((1 + w x^{-a})^{1/a} - 1),
// supported on 1 + w x^{-a} > 0 (zero outside).  As x -> inf this tends to
// the normal(0, a^2) density.  Throws DomainError (x <= 0 or a outside
// (0,1)).
double transformed_increment_density(double x, double w, double a);

struct RejectionEstimate {
  double estimate;
  double std_error;
};

// Monte Carlo estimate of the one-step holding probability at x over
// n_samples independent proposals (n_samples >= 1000).
RejectionEstimate rejection_probability(const SamplerSpec& spec, double x,
                                        long n_samples, RngStream& rng);

struct GridSpec {
  double lo;
  double hi;
  double step;
};

// Outcome of a grid check: the verdict plus named witness values (worst
// points, fitted rates, extremes).  Grid evidence, not proof.
struct GridReport {
  GridSpec grid;
  std::optional<GridSpec> grid2;  // second axis for two-argument checks
  bool verdict = false;
  std::vector<std::pair<std::string, double>> witnesses;
};

// Checks that s is a usable increment density on the symmetric grid:
// symmetric within 1e-9, strictly positive, trapezoid mass within 1e-3 of 1,
// and exponentially dominated on the outer half (envelope anchored at L/2
// with 10% slack).  Witnesses: integral, symmetry_max, min_density,
// decay_rate, tail_ratio_max, tail_worst_u.  Throws BadGrid (asymmetric
// grid, step > 0.01, or too few points).
GridReport check_mt_good(const std::function<double(double)>& s,
                         const GridSpec& grid);

// Evidence for a uniform minorization q(x, x+w) >= c * s(w): reports
// c_star = min over the grid of q(x, x+w)/s(w), verdict c_star > 1e-6.
// s must pass check_mt_good on the w grid first (DomainError otherwise).
// Witnesses: c_star, worst_x, worst_w.
GridReport check_umid(const std::function<double(double, double)>& q,
                      const std::function<double(double)>& s,
                      const GridSpec& x_grid, const GridSpec& w_grid);

double normal_density(double x, double mean, double sd);

}  // namespace vbchain
