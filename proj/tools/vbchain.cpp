// Command-line surface: reads/writes the text formats, dispatches to the
// library modules, and emits deterministic CSV (or plain key = value)
// reports.  Exit codes: 0 success, 1 module error, 2 usage error, 3 missing
// file.
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vbchain/errors.hpp"
#include "vbchain/functional.hpp"
#include "vbchain/io.hpp"
#include "vbchain/kernel.hpp"
#include "vbchain/mh_continuous.hpp"
#include "vbchain/mh_finite.hpp"
#include "vbchain/peskun.hpp"
#include "vbchain/simulate.hpp"
#include "vbchain/spectral.hpp"
#include "vbchain/variance.hpp"

namespace {

using vbchain::format_double;

std::string bool_text(bool v) { return v ? "true" : "false"; }

void emit(const std::string& format, const std::vector<std::string>& header,
          const std::vector<std::vector<std::string>>& rows) {
  if (format == "csv") {
    std::string line;
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i > 0) line += ',';
      line += header[i];
    }
    std::cout << line << '\n';
    for (const auto& row : rows) {
      line.clear();
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i > 0) line += ',';
        line += row[i];
      }
      std::cout << line << '\n';
    }
  } else {
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r > 0) std::cout << '\n';
      for (std::size_t i = 0; i < header.size(); ++i) {
        std::cout << header[i] << " = " << rows[r][i] << '\n';
      }
    }
  }
}

std::uint64_t parse_seed_text(const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw vbchain::UsageError("invalid seed '" + text + "'");
  }
  return static_cast<std::uint64_t>(value);
}

// Precedence: --seed flag, then VBCHAIN_SEED, then 0.
std::uint64_t resolve_seed(bool flag_given, std::uint64_t flag_value) {
  if (flag_given) return flag_value;
  if (const char* env = std::getenv("VBCHAIN_SEED")) {
    return parse_seed_text(env);
  }
  return 0;
}

long to_count(double value, const char* what) {
  if (!(value >= 1.0) || value > 9e15 || value != std::floor(value)) {
    throw vbchain::UsageError(std::string(what) + " must be a positive integer");
  }
  return static_cast<long>(value);
}

std::vector<long> parse_long_list(const std::string& text, const char* what) {
  std::vector<long> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() ||
        errno == ERANGE) {
      throw vbchain::UsageError(std::string("invalid ") + what + " entry '" +
                                token + "'");
    }
    out.push_back(to_count(v, what));
  }
  if (out.empty()) {
    throw vbchain::UsageError(std::string("empty ") + what + " list");
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text,
                                      const char* what) {
  std::vector<double> out;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() ||
        errno == ERANGE) {
      throw vbchain::UsageError(std::string("invalid ") + what + " entry '" +
                                token + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) {
    throw vbchain::UsageError(std::string("empty ") + what + " list");
  }
  return out;
}

vbchain::GridSpec parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ':')) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (token.empty() || end != token.c_str() + token.size() ||
        errno == ERANGE) {
      throw vbchain::UsageError("invalid grid '" + text + "'");
    }
    parts.push_back(v);
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] > parts[0])) {
    throw vbchain::UsageError("grid must be lo:hi:step with step > 0");
  }
  return {parts[0], parts[1], parts[2]};
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw vbchain::Error("cannot write " + path);
  }
  out << body;
  if (!out) {
    throw vbchain::Error("write failed for " + path);
  }
}

struct CommonOpts {
  std::string format = "csv";
  double tol = 1e-10;
  double seed_flag = 0.0;  // CLI11 stores; resolved via resolve_seed
};

int run_cli(int argc, char** argv) {
  CLI::App app{"Reversible-kernel spectral analysis and sampler toolkit"};
  app.require_subcommand(1);

  // ---- analyze ----------------------------------------------------------
  auto* analyze = app.add_subcommand(
      "analyze", "Classify a kernel file by its mean-zero spectrum");
  std::string analyze_path;
  std::string analyze_format = "csv";
  double analyze_tol = 1e-10;
  analyze->add_option("kernel", analyze_path, "VBK1 kernel file")->required();
  analyze->add_option("--tol", analyze_tol, "detailed-balance tolerance");
  analyze->add_option("--format", analyze_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  analyze->callback([&]() {
    vbchain::KernelOptions opts;
    opts.db_tolerance = analyze_tol;
    const vbchain::ReversibleKernel K = vbchain::read_kernel(analyze_path, opts);
    const vbchain::SpectralDecomposition D = vbchain::eigendecompose(K);
    const vbchain::Classification C = vbchain::classify(D);
    emit(analyze_format,
         {"n", "Lambda", "lambda_min", "K_bound", "variance_bounding",
          "geometrically_ergodic", "positive", "near_periodic", "reducible"},
         {{std::to_string(K.size()), format_double(C.Lambda),
           format_double(C.lambda_min), format_double(C.K_bound),
           bool_text(C.variance_bounding), bool_text(C.geometrically_ergodic),
           bool_text(C.positive), bool_text(C.near_periodic),
           bool_text(C.reducible)}});
  });

  // ---- variance ---------------------------------------------------------
  auto* variance = app.add_subcommand(
      "variance", "Exact and finite-horizon asymptotic variances");
  std::string variance_kernel, variance_h;
  std::string variance_horizons = "1,100,10000";
  std::string variance_format = "csv";
  double variance_tol = 1e-10;
  variance->add_option("kernel", variance_kernel, "VBK1 kernel file")
      ->required();
  variance->add_option("functional", variance_h, "whitespace-separated values")
      ->required();
  variance->add_option("--horizons", variance_horizons,
                       "comma-separated horizons");
  variance->add_option("--tol", variance_tol, "detailed-balance tolerance");
  variance->add_option("--format", variance_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  variance->callback([&]() {
    vbchain::KernelOptions opts;
    opts.db_tolerance = variance_tol;
    const vbchain::ReversibleKernel K =
        vbchain::read_kernel(variance_kernel, opts);
    const vbchain::Functional f =
        vbchain::make_functional(K, vbchain::read_weights(variance_h));
    const vbchain::SpectralDecomposition D = vbchain::eigendecompose(K);
    const std::vector<long> horizons =
        parse_long_list(variance_horizons, "horizon");
    const vbchain::VarianceReport rep =
        vbchain::variance_report(D, f, horizons);
    const vbchain::Classification C = vbchain::classify(D);

    std::vector<std::vector<std::string>> rows;
    for (const auto& [n, var] : rep.v_finite_n) {
      rows.push_back({std::to_string(n), format_double(var)});
    }
    emit(variance_format, {"n", "var"}, rows);
    emit(variance_format, {"var_pi", "v_exact", "ratio", "K_bound"},
         {{format_double(rep.var_pi), format_double(rep.v_exact.value),
           format_double(rep.ratio), format_double(C.K_bound)}});
  });

  // ---- compare ----------------------------------------------------------
  auto* compare = app.add_subcommand(
      "compare", "Off-diagonal domination and ordering report");
  std::string compare_k1, compare_k2;
  int compare_functionals = 50;
  double compare_seed = 0.0;
  double compare_tol = 1e-10;
  std::string compare_format = "csv";
  compare->add_option("kernel1", compare_k1)->required();
  compare->add_option("kernel2", compare_k2)->required();
  compare->add_option("--functionals", compare_functionals,
                      "random functionals in the report")
      ->check(CLI::Range(0, 100000));
  auto* compare_seed_opt = compare->add_option("--seed", compare_seed);
  compare->add_option("--tol", compare_tol, "detailed-balance tolerance");
  compare->add_option("--format", compare_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  compare->callback([&]() {
    vbchain::KernelOptions opts;
    opts.db_tolerance = compare_tol;
    const vbchain::ReversibleKernel K1 = vbchain::read_kernel(compare_k1, opts);
    const vbchain::ReversibleKernel K2 = vbchain::read_kernel(compare_k2, opts);
    const std::uint64_t seed =
        resolve_seed(compare_seed_opt->count() > 0,
                     static_cast<std::uint64_t>(compare_seed));
    const std::vector<vbchain::Functional> hs =
        vbchain::random_functionals(K1, compare_functionals, seed);
    const vbchain::PeskunReport rep = vbchain::ordering_report(K1, K2, hs);
    emit(compare_format,
         {"dominates", "worst_violation", "Lambda1", "Lambda2"},
         {{bool_text(rep.dominates), format_double(rep.worst_violation),
           format_double(rep.Lambda_pair.first),
           format_double(rep.Lambda_pair.second)}});
    std::vector<std::vector<std::string>> rows;
    for (const auto& pair : rep.variance_pairs) {
      rows.push_back({pair.id, format_double(pair.v1.value),
                      format_double(pair.v2.value)});
    }
    emit(compare_format, {"functional", "v1", "v2"}, rows);
  });

  // ---- mh-build ---------------------------------------------------------
  auto* mh_build = app.add_subcommand(
      "mh-build", "Build an accept-reject kernel from target and proposal");
  std::string mh_target, mh_proposal, mh_out;
  mh_build->add_option("target", mh_target, "target weights file")->required();
  mh_build->add_option("proposal", mh_proposal, "VBQ1 proposal file")
      ->required();
  mh_build->add_option("-o,--out", mh_out, "output kernel file")->required();
  mh_build->callback([&]() {
    const Eigen::VectorXd t = vbchain::read_weights(mh_target);
    const vbchain::ProposalTable q = vbchain::read_proposal(mh_proposal);
    const vbchain::ReversibleKernel K = vbchain::build_sub_mh(t, q);
    vbchain::write_kernel(mh_out, K);
  });

  // ---- example9 ---------------------------------------------------------
  auto* example9 = app.add_subcommand(
      "example9", "Drift/accept-reject kernel pair on a truncated window");
  int example9_n = 25;
  std::string example9_prefix;
  std::string example9_format = "csv";
  example9->add_option("--N", example9_n, "window half-width")->required();
  example9->add_option("--out-prefix", example9_prefix)->required();
  example9->add_option("--format", example9_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  example9->callback([&]() {
    const auto [P1, P2] = vbchain::build_example9(example9_n);
    vbchain::write_kernel(example9_prefix + "_p1.vbk", P1);
    vbchain::write_kernel(example9_prefix + "_p2.vbk", P2);
    const vbchain::PeskunReport dom = vbchain::dominates_off_diagonal(P1, P2);
    const vbchain::SpectralDecomposition D1 = vbchain::eigendecompose(P1);
    const vbchain::SpectralDecomposition D2 = vbchain::eigendecompose(P2);
    emit(example9_format,
         {"dominates", "worst_violation", "Lambda1", "Lambda2", "lambda_min1",
          "lambda_min2"},
         {{bool_text(dom.dominates), format_double(dom.worst_violation),
           format_double(D1.eigenvalues[0]), format_double(D2.eigenvalues[0]),
           format_double(D1.eigenvalues[D1.eigenvalues.size() - 1]),
           format_double(D2.eigenvalues[D2.eigenvalues.size() - 1])}});
  });

  // ---- simulate ---------------------------------------------------------
  auto* simulate = app.add_subcommand(
      "simulate", "Write a simulated path (kernel file or 'example9z')");
  std::string simulate_source, simulate_h, simulate_out;
  double simulate_x0 = 0.0;
  double simulate_n = 1000.0;
  double simulate_seed = 0.0;
  double simulate_tol = 1e-10;
  simulate->add_option("source", simulate_source,
                       "VBK1 kernel file or the literal example9z")
      ->required();
  simulate->add_option("--functional", simulate_h,
                       "optional functional file (kernel sources)");
  simulate->add_option("--x0", simulate_x0, "start state");
  simulate->add_option("--n", simulate_n, "path length")->required();
  auto* simulate_seed_opt = simulate->add_option("--seed", simulate_seed);
  simulate->add_option("--tol", simulate_tol, "detailed-balance tolerance");
  simulate->add_option("--out", simulate_out, "output CSV path")->required();
  simulate->callback([&]() {
    const long n = to_count(simulate_n, "--n");
    const std::uint64_t seed =
        resolve_seed(simulate_seed_opt->count() > 0,
                     static_cast<std::uint64_t>(simulate_seed));
    vbchain::Trace trace;
    if (simulate_source == "example9z") {
      if (!simulate_h.empty()) {
        throw vbchain::UsageError(
            "--functional applies only to kernel sources");
      }
      trace = vbchain::simulate_path(vbchain::Example9Z{},
                                     static_cast<long>(simulate_x0), n, seed);
    } else {
      vbchain::KernelOptions opts;
      opts.db_tolerance = simulate_tol;
      const vbchain::ReversibleKernel K =
          vbchain::read_kernel(simulate_source, opts);
      const int x0 = static_cast<int>(simulate_x0);
      if (simulate_h.empty()) {
        trace = vbchain::simulate_path(K, x0, n, seed);
      } else {
        const vbchain::Functional f =
            vbchain::make_functional(K, vbchain::read_weights(simulate_h));
        trace = vbchain::simulate_path(K, f, x0, n, seed);
      }
    }
    std::string body = "# source=" + trace.source +
                       ";seed=" + std::to_string(trace.seed) +
                       ";generator=" + trace.generator + "\n";
    body += "index,value\n";
    for (std::size_t i = 0; i < trace.values.size(); ++i) {
      body += std::to_string(i);
      body += ',';
      body += format_double(trace.values[i]);
      body += '\n';
    }
    write_text_file(simulate_out, body);
  });

  // ---- clt --------------------------------------------------------------
  auto* clt = app.add_subcommand(
      "clt", "Replicated normalized-sum diagnostics against the exact variance");
  std::string clt_kernel, clt_h;
  double clt_n = 1e5;
  int clt_replicates = 200;
  double clt_seed = 0.0;
  double clt_tol = 1e-10;
  std::string clt_format = "csv";
  clt->add_option("kernel", clt_kernel)->required();
  clt->add_option("functional", clt_h)->required();
  clt->add_option("--n", clt_n, "path length per replicate");
  clt->add_option("--replicates", clt_replicates)->check(CLI::Range(2, 100000));
  auto* clt_seed_opt = clt->add_option("--seed", clt_seed);
  clt->add_option("--tol", clt_tol, "detailed-balance tolerance");
  clt->add_option("--format", clt_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  clt->callback([&]() {
    vbchain::KernelOptions opts;
    opts.db_tolerance = clt_tol;
    const vbchain::ReversibleKernel K = vbchain::read_kernel(clt_kernel, opts);
    const vbchain::Functional f =
        vbchain::make_functional(K, vbchain::read_weights(clt_h));
    const std::uint64_t seed = resolve_seed(
        clt_seed_opt->count() > 0, static_cast<std::uint64_t>(clt_seed));
    const vbchain::CltReport rep = vbchain::clt_diagnostic(
        K, f, to_count(clt_n, "--n"), clt_replicates, seed);
    emit(clt_format,
         {"replicates", "n", "empirical_mean", "empirical_var", "reference_v",
          "z_score", "skewness", "excess_kurtosis"},
         {{std::to_string(rep.replicates), std::to_string(rep.n),
           format_double(rep.empirical_mean), format_double(rep.empirical_var),
           format_double(rep.reference_v), format_double(rep.z_score),
           format_double(rep.skewness), format_double(rep.excess_kurtosis)}});
  });

  // ---- probe-rejection ---------------------------------------------------
  auto* probe = app.add_subcommand(
      "probe-rejection",
      "One-step holding probability of the state-dependent sampler");
  double probe_b = 3.0;
  std::string probe_x = "100,10000,1000000";
  double probe_samples = 10000.0;
  double probe_seed = 0.0;
  std::string probe_format = "csv";
  probe->add_option("--b", probe_b, "proposal exponent")->required();
  probe->add_option("--x", probe_x, "comma-separated probe states");
  probe->add_option("--samples", probe_samples);
  auto* probe_seed_opt = probe->add_option("--seed", probe_seed);
  probe->add_option("--format", probe_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  probe->callback([&]() {
    const long samples = to_count(probe_samples, "--samples");
    const std::uint64_t seed = resolve_seed(
        probe_seed_opt->count() > 0, static_cast<std::uint64_t>(probe_seed));
    const vbchain::SamplerSpec spec = vbchain::make_state_dependent_sampler(
        vbchain::half_cauchy_target(), probe_b);
    const std::vector<double> xs = parse_double_list(probe_x, "--x");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      vbchain::RngStream rng(seed, static_cast<std::uint64_t>(i));
      const vbchain::RejectionEstimate est =
          vbchain::rejection_probability(spec, xs[i], samples, rng);
      rows.push_back({format_double(xs[i]), format_double(est.estimate),
                      format_double(est.std_error)});
    }
    emit(probe_format, {"x", "estimate", "std_error"}, rows);
  });

  // ---- increment-density -------------------------------------------------
  auto* incdens = app.add_subcommand(
      "increment-density",
      "Transformed-increment density against its large-x normal limit");
  double inc_a = 0.5;
  double inc_x = 1e8;
  std::string inc_grid = "-3:3:0.01";
  std::string inc_format = "csv";
  incdens->add_option("--a", inc_a, "power exponent")->required();
  incdens->add_option("--x", inc_x, "base state")->required();
  incdens->add_option("--grid", inc_grid, "lo:hi:step");
  incdens->add_option("--format", inc_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  incdens->callback([&]() {
    const vbchain::GridSpec grid = parse_grid(inc_grid);
    std::vector<std::vector<std::string>> rows;
    const long m = std::llround((grid.hi - grid.lo) / grid.step);
    for (long i = 0; i <= m; ++i) {
      const double w = grid.lo + static_cast<double>(i) * grid.step;
      const double density =
          vbchain::transformed_increment_density(inc_x, w, inc_a);
      const double limit = vbchain::normal_density(w, 0.0, inc_a);
      rows.push_back({format_double(w), format_double(density),
                      format_double(limit)});
    }
    emit(inc_format, {"w", "density", "limit_density"}, rows);
  });

  // ---- check-umid --------------------------------------------------------
  auto* umid = app.add_subcommand(
      "check-umid",
      "Grid evidence for a uniform increment minorization of the "
      "gradient-informed sampler");
  double umid_delta = 1.0;
  std::string umid_x_grid = "-50:50:0.1";
  std::string umid_w_grid = "-5:5:0.01";
  std::string umid_format = "csv";
  umid->add_option("--delta", umid_delta, "proposal step");
  umid->add_option("--x-grid", umid_x_grid, "lo:hi:step");
  umid->add_option("--w-grid", umid_w_grid, "lo:hi:step");
  umid->add_option("--format", umid_format)
      ->check(CLI::IsMember({"csv", "plain"}));
  umid->callback([&]() {
    const vbchain::SamplerSpec spec = vbchain::make_langevin_sampler(
        vbchain::smooth_laplace_target(), umid_delta);
    const double delta = umid_delta;
    auto q = [&spec](double x, double y) {
      return std::exp(vbchain::proposal_log_density(spec, x, y));
    };
    auto s = [delta](double w) {
      return vbchain::normal_density(w, 0.0, delta);
    };
    const vbchain::GridReport rep = vbchain::check_umid(
        q, s, parse_grid(umid_x_grid), parse_grid(umid_w_grid));
    double c_star = 0.0, worst_x = 0.0, worst_w = 0.0;
    for (const auto& [name, value] : rep.witnesses) {
      if (name == "c_star") c_star = value;
      if (name == "worst_x") worst_x = value;
      if (name == "worst_w") worst_w = value;
    }
    emit(umid_format, {"verdict", "c_star", "worst_x", "worst_w"},
         {{bool_text(rep.verdict), format_double(c_star),
           format_double(worst_x), format_double(worst_w)}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const vbchain::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const vbchain::FileNotFound& e) {
    std::cerr << "missing file: " << e.what() << '\n';
    return 3;
  } catch (const vbchain::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
