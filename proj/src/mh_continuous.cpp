#include "vbchain/mh_continuous.hpp"

#include <cmath>
#include <limits>

#include "vbchain/errors.hpp"

namespace vbchain {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogRoot2Pi = 0.918938533204672742;  // log sqrt(2 pi)

double log_normal_density(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - kLogRoot2Pi;
}

struct ProposalMoments {
  double mean;
  double sd;
};

ProposalMoments proposal_moments(const SamplerSpec& spec, double x) {
  switch (spec.proposal.kind) {
    case ProposalKind::kRandomWalk:
      return {x, spec.proposal.scale};
    case ProposalKind::kLangevin:
      return {x + 0.5 * spec.proposal.delta * spec.target.dlog_density(x),
              spec.proposal.delta};
    case ProposalKind::kStateDependent:
      if (!(x > 0.0)) {
        throw DomainError("state-dependent proposal needs a positive state");
      }
      return {x, std::pow(x, 0.5 * spec.proposal.b)};
  }
  throw DomainError("unhandled proposal kind");
}

}  // namespace

Target laplace_target() {
  Target t;
  t.name = "laplace";
  t.support = {-kInf, kInf};
  t.log_density = [](double x) { return -std::abs(x); };
  return t;
}

Target smooth_laplace_target() {
  Target t;
  t.name = "smooth-laplace";
  t.support = {-kInf, kInf};
  t.log_density = [](double x) { return -std::hypot(1.0, x); };
  t.dlog_density = [](double x) { return -x / std::hypot(1.0, x); };
  return t;
}

Target half_cauchy_target() {
  Target t;
  t.name = "half-cauchy";
  t.support = {0.0, kInf};
  t.log_density = [](double x) {
    return std::log(2.0 / M_PI) - std::log1p(x * x);
  };
  t.dlog_density = [](double x) { return -2.0 * x / (1.0 + x * x); };
  return t;
}

Target uniform_target(double lo, double hi) {
  if (!(hi > lo)) {
    throw DomainError("uniform target needs lo < hi");
  }
  Target t;
  t.name = "uniform";
  t.support = {lo, hi};
  const double log_width = std::log(hi - lo);
  t.log_density = [log_width](double) { return -log_width; };
  t.dlog_density = [](double) { return 0.0; };
  return t;
}

SamplerSpec make_random_walk_sampler(Target target, double scale) {
  SamplerSpec spec;
  spec.target = std::move(target);
  spec.proposal.kind = ProposalKind::kRandomWalk;
  spec.proposal.scale = scale;
  validate_spec(spec);
  return spec;
}

SamplerSpec make_langevin_sampler(Target target, double delta) {
  SamplerSpec spec;
  spec.target = std::move(target);
  spec.proposal.kind = ProposalKind::kLangevin;
  spec.proposal.delta = delta;
  validate_spec(spec);
  return spec;
}

SamplerSpec make_state_dependent_sampler(Target target, double b) {
  SamplerSpec spec;
  spec.target = std::move(target);
  spec.proposal.kind = ProposalKind::kStateDependent;
  spec.proposal.b = b;
  if (b == 2.0) {
    spec.transform = {TransformKind::kLog, 1.0};
  } else if (b < 2.0) {
    spec.transform = {TransformKind::kPower, 1.0 - b / 2.0};
  } else {
    spec.transform = {TransformKind::kNone, 1.0};
  }
  validate_spec(spec);
  return spec;
}

void validate_spec(const SamplerSpec& spec) {
  if (!spec.target.log_density) {
    throw DomainError("target has no log density");
  }
  switch (spec.proposal.kind) {
    case ProposalKind::kRandomWalk:
      if (!(spec.proposal.scale > 0.0) || !std::isfinite(spec.proposal.scale)) {
        throw DomainError("random-walk scale must be positive and finite");
      }
      break;
    case ProposalKind::kLangevin:
      if (!(spec.proposal.delta > 0.0) || !std::isfinite(spec.proposal.delta)) {
        throw DomainError("Langevin step must be positive and finite");
      }
      if (!spec.target.dlog_density) {
        throw DomainError("Langevin proposals need the target gradient");
      }
      break;
    case ProposalKind::kStateDependent:
      if (!(spec.proposal.b > 0.0) || !std::isfinite(spec.proposal.b)) {
        throw DomainError("state-dependent exponent must be positive");
      }
      if (spec.target.support.lo != 0.0 || spec.target.support.hi != kInf) {
        throw DomainError("state-dependent proposals need support (0, inf)");
      }
      break;
  }
  switch (spec.transform.kind) {
    case TransformKind::kNone:
      break;
    case TransformKind::kLog:
      if (spec.proposal.kind != ProposalKind::kStateDependent ||
          spec.proposal.b != 2.0) {
        throw DomainError("log transform pairs only with exponent b = 2");
      }
      break;
    case TransformKind::kPower:
      if (spec.proposal.kind != ProposalKind::kStateDependent ||
          !(spec.proposal.b < 2.0) ||
          spec.transform.a != 1.0 - spec.proposal.b / 2.0 ||
          !(spec.transform.a > 0.0 && spec.transform.a < 1.0)) {
        throw DomainError("power transform requires a = 1 - b/2 with b < 2");
      }
      break;
  }
}

double proposal_log_density(const SamplerSpec& spec, double x, double y) {
  const ProposalMoments m = proposal_moments(spec, x);
  return log_normal_density(y, m.mean, m.sd);
}

double sample_proposal(const SamplerSpec& spec, double x, RngStream& rng) {
  const ProposalMoments m = proposal_moments(spec, x);
  return m.mean + m.sd * rng.normal();
}

StepResult mh_step(const SamplerSpec& spec, double x, RngStream& rng) {
  if (!spec.target.support.contains(x)) {
    throw InvalidState("current state lies outside the target support");
  }
  const double y = sample_proposal(spec, x, rng);
  const double u = rng.uniform();  // always drawn: fixed stream advance
  if (!spec.target.support.contains(y)) {
    return {x, false};
  }
  const double log_alpha = spec.target.log_density(y) -
                           spec.target.log_density(x) +
                           proposal_log_density(spec, y, x) -
                           proposal_log_density(spec, x, y);
  if (std::log(u) < log_alpha) {
    return {y, true};
  }
  return {x, false};
}

std::vector<double> apply_transform(const SamplerSpec& spec,
                                    const std::vector<double>& states) {
  std::vector<double> out;
  out.reserve(states.size());
  switch (spec.transform.kind) {
    case TransformKind::kNone:
      out = states;
      break;
    case TransformKind::kLog:
      for (double x : states) {
        if (!(x > 0.0)) {
          throw NonPositiveState("log transform needs positive states");
        }
        out.push_back(std::log(x));
      }
      break;
    case TransformKind::kPower:
      for (double x : states) {
        if (!(x > 0.0)) {
          throw NonPositiveState("power transform needs positive states");
        }
        out.push_back(std::pow(x, spec.transform.a));
      }
      break;
  }
  return out;
}

double transformed_increment_density(double x, double w, double a) {
  if (!(a > 0.0 && a < 1.0)) {
    throw DomainError("power exponent must lie in (0, 1)");
  }
  if (!(x > 0.0)) {
    throw DomainError("base state must be positive");
  }
  const double u = w * std::pow(x, -a);
  if (!(1.0 + u > 0.0)) {
    return 0.0;
  }
  const double log1pu = std::log1p(u);
  const double z = std::pow(x, a) * std::expm1(log1pu / a);
  const double jacobian = std::exp(((1.0 - a) / a) * log1pu) / a;
  return normal_density(z, 0.0, 1.0) * jacobian;
}

RejectionEstimate rejection_probability(const SamplerSpec& spec, double x,
                                        long n_samples, RngStream& rng) {
  if (n_samples < 1000) {
    throw DomainError("rejection probe needs at least 1000 samples");
  }
  long rejects = 0;
  for (long i = 0; i < n_samples; ++i) {
    if (!mh_step(spec, x, rng).accepted) {
      ++rejects;
    }
  }
  const double p = static_cast<double>(rejects) / static_cast<double>(n_samples);
  const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  return {p, se};
}

GridReport check_mt_good(const std::function<double(double)>& s,
                         const GridSpec& grid) {
  if (!(grid.step > 0.0) || grid.step > 0.01 + 1e-12) {
    throw BadGrid("grid step must lie in (0, 0.01]");
  }
  if (!(grid.hi > 0.0) || std::abs(grid.lo + grid.hi) > 1e-12) {
    throw BadGrid("grid must be symmetric about 0");
  }
  const long m = std::llround((grid.hi - grid.lo) / grid.step);
  if (m < 8) {
    throw BadGrid("grid has too few points");
  }
  if (std::abs(grid.lo + static_cast<double>(m) * grid.step - grid.hi) >
      1e-8 * (1.0 + std::abs(grid.hi))) {
    throw BadGrid("grid step does not divide the range");
  }

  std::vector<double> u(static_cast<std::size_t>(m) + 1);
  std::vector<double> val(static_cast<std::size_t>(m) + 1);
  for (long i = 0; i <= m; ++i) {
    u[static_cast<std::size_t>(i)] = grid.lo + static_cast<double>(i) * grid.step;
    val[static_cast<std::size_t>(i)] = s(u[static_cast<std::size_t>(i)]);
  }

  double symmetry_max = 0.0;
  double min_density = kInf;
  double integral = 0.0;
  for (long i = 0; i <= m; ++i) {
    const std::size_t k = static_cast<std::size_t>(i);
    const std::size_t mirror = static_cast<std::size_t>(m - i);
    symmetry_max = std::max(symmetry_max, std::abs(val[k] - val[mirror]));
    min_density = std::min(min_density, val[k]);
    const double weight = (i == 0 || i == m) ? 0.5 : 1.0;
    integral += weight * val[k];
  }
  integral *= grid.step;

  const bool symmetric = symmetry_max <= 1e-9;
  const bool positive = min_density > 0.0;
  const bool mass_ok = integral >= 1.0 - 1e-3 && integral <= 1.0 + 1e-3;

  // Tail envelope: anchor an exponential at the inner edge of the outer
  // half-grid (slope from the first two points) and require every outer
  // point to sit under it with 10% slack.
  bool tail_ok = false;
  double decay_rate = 0.0;
  double tail_ratio_max = kInf;
  double tail_worst_u = grid.hi;
  if (positive) {
    const double half = grid.hi / 2.0;
    long i0 = -1;
    for (long i = 0; i <= m; ++i) {
      if (u[static_cast<std::size_t>(i)] >= half - 1e-12) {
        i0 = i;
        break;
      }
    }
    if (i0 >= 0 && i0 + 1 <= m) {
      const std::size_t k0 = static_cast<std::size_t>(i0);
      const double g0 = std::log(val[k0]);
      const double g1 = std::log(val[k0 + 1]);
      decay_rate = (g0 - g1) / grid.step;
      const double log_amplitude = g0 + decay_rate * u[k0];
      tail_ratio_max = 0.0;
      for (long i = 0; i <= m; ++i) {
        const std::size_t k = static_cast<std::size_t>(i);
        const double au = std::abs(u[k]);
        if (au < half - 1e-12) continue;
        const double ratio =
            std::exp(std::log(val[k]) + decay_rate * au - log_amplitude);
        if (ratio > tail_ratio_max) {
          tail_ratio_max = ratio;
          tail_worst_u = u[k];
        }
      }
      tail_ok = decay_rate > 0.0 && tail_ratio_max <= 1.1;
    }
  }

  GridReport rep;
  rep.grid = grid;
  rep.verdict = symmetric && positive && mass_ok && tail_ok;
  rep.witnesses = {
      {"integral", integral},
      {"symmetry_max", symmetry_max},
      {"min_density", min_density},
      {"decay_rate", decay_rate},
      {"tail_ratio_max", tail_ratio_max},
      {"tail_worst_u", tail_worst_u},
  };
  return rep;
}

GridReport check_umid(const std::function<double(double, double)>& q,
                      const std::function<double(double)>& s,
                      const GridSpec& x_grid, const GridSpec& w_grid) {
  if (!(x_grid.step > 0.0) || !(x_grid.hi > x_grid.lo)) {
    throw BadGrid("invalid x grid");
  }
  const GridReport mt = check_mt_good(s, w_grid);
  if (!mt.verdict) {
    throw DomainError("increment density fails the MT-good check on this grid");
  }

  const long mx = std::llround((x_grid.hi - x_grid.lo) / x_grid.step);
  const long mw = std::llround((w_grid.hi - w_grid.lo) / w_grid.step);
  double c_star = kInf;
  double worst_x = x_grid.lo;
  double worst_w = w_grid.lo;
  for (long ix = 0; ix <= mx; ++ix) {
    const double x = x_grid.lo + static_cast<double>(ix) * x_grid.step;
    for (long iw = 0; iw <= mw; ++iw) {
      const double w = w_grid.lo + static_cast<double>(iw) * w_grid.step;
      const double ratio = q(x, x + w) / s(w);
      if (ratio < c_star) {
        c_star = ratio;
        worst_x = x;
        worst_w = w;
      }
    }
  }

  GridReport rep;
  rep.grid = w_grid;
  rep.grid2 = x_grid;
  rep.verdict = c_star > 1e-6;
  rep.witnesses = {
      {"c_star", c_star},
      {"worst_x", worst_x},
      {"worst_w", worst_w},
  };
  return rep;
}

double normal_density(double x, double mean, double sd) {
  return std::exp(log_normal_density(x, mean, sd));
}

}  // namespace vbchain
