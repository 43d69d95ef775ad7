#pragma once

// clockpt command-line front end. run_cli() takes argv-style arguments and
// writes CSV (or SVG) to `out`, diagnostics to `err`, and returns the exit code.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "clockpt/clockpt.hpp"
#include "svg.hpp"

namespace clockpt::cli {

enum ExitCode : int { kOk = 0, kInfeasible = 1, kUsage = 2, kSolverFailure = 3 };

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline const char* fmt(bool b) { return b ? "true" : "false"; }

/// "a:b:step", inclusive of b up to rounding.
inline std::vector<double> parse_scan(const std::string& text) {
  double a = 0, b = 0, step = 0;
  char tail = 0;
  if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &a, &b, &step, &tail) != 3 || !(step > 0.0) || b < a) {
    throw CLI::ValidationError("--scan", "expected lo:hi:step with step > 0 and hi >= lo, got '" + text + "'");
  }
  const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  if (n > 10'000'000) throw CLI::ValidationError("--scan", "too many points");
  std::vector<double> v;
  for (long i = 0; i < n; ++i) v.push_back(a + step * static_cast<double>(i));
  return v;
}

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotStochastic:
    case ErrorKind::NotAProbability:
      return kInfeasible;
    case ErrorKind::ContinuationLost:
    case ErrorKind::SingularJacobian:
    case ErrorKind::NormalizationUnderflow:
    case ErrorKind::DegenerateQuartic:
    case ErrorKind::P3Vanishes:
    case ErrorKind::AtSpecialPoint:
    case ErrorKind::RadicandNegative:
      return kSolverFailure;
    default:
      return kUsage;
  }
}

/// Model selection shared by matrix and probe.
struct ModelFlags {
  int q = 4;
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::vector<double> modes;
  bool potts = false;
  std::optional<double> theta;
  std::optional<double> beta;
  std::optional<double> clock;

  void attach(CLI::App* app) {
    app->add_option("--q", q, "Number of states")->check(CLI::Range(kMinStates, kMaxStates))->capture_default_str();
    app->add_option("--lambda1", lambda1, "Second largest eigenvalue lambda1");
    app->add_option("--lambda2", lambda2, "Third eigenvalue lambda2");
    app->add_option("--modes", modes, "All independent eigenvalues lambda1..lambda_floor(q/2)");
    app->add_flag("--potts", potts, "Potts model (give --theta or --beta)");
    app->add_option("--theta", theta, "Potts coupling e^beta")->check(CLI::PositiveNumber);
    app->add_option("--beta", beta, "Potts inverse temperature");
    app->add_option("--clock", clock, "Standard clock model with coupling J");
  }

  TransferSpec build() const {
    const int chosen = static_cast<int>(potts) + static_cast<int>(clock.has_value()) +
                       static_cast<int>(!modes.empty() || lambda1.has_value() || lambda2.has_value());
    if (chosen != 1) {
      throw CLI::ValidationError("model", "choose exactly one of --lambda1/--lambda2, --modes, --potts, --clock");
    }
    if (potts) {
      if (theta.has_value() == beta.has_value()) throw CLI::ValidationError("--potts", "needs one of --theta, --beta");
      return theta ? make_potts_theta(q, *theta) : make_potts(q, *beta);
    }
    if (clock) return make_standard_clock(q, *clock);
    if (!modes.empty()) return TransferSpec::from_modes(q, modes);
    if (!lambda1) throw CLI::ValidationError("--lambda1", "required");
    std::vector<double> m{*lambda1};
    if (lambda2) m.push_back(*lambda2);
    if (static_cast<int>(m.size()) != q / 2) {
      throw CLI::ValidationError("--lambda2", "q = " + std::to_string(q) + " needs " + std::to_string(q / 2) +
                                                  " independent eigenvalues; use --modes for q > 5");
    }
    return TransferSpec::from_modes(q, m);
  }
};

inline int cmd_matrix(const ModelFlags& model, bool strict, std::ostream& out, std::ostream& err) {
  const TransferSpec spec = model.build();
  const auto report = validate_non_increasing(spec);
  out << "index,lambda,r\n";
  for (int j = 0; j < spec.q(); ++j) {
    out << j << ',' << fmt(spec.eigenvalue(j)) << ',' << fmt(spec.row()[static_cast<std::size_t>(j)]) << '\n';
  }
  out << "feasible," << fmt(report.feasible) << ',' << report.violated << '\n';
  if (strict && !report.feasible) {
    err << "infeasible: " << report.violated << '\n';
    return kInfeasible;
  }
  return kOk;
}

struct ProbeFlags {
  double u = 1.0;
  int levels = kDefaultProbeLevels;
  double tol = kDefaultProbeTol;
  int children = 2;
};

inline int cmd_probe(const ModelFlags& model, const ProbeFlags& f, bool strict, std::ostream& out,
                     std::ostream& err) {
  const TransferSpec spec = model.build();
  if (strict) {
    if (const auto report = validate_non_increasing(spec); !report.feasible) {
      err << "infeasible: " << report.violated << '\n';
      return kInfeasible;
    }
  }
  const auto result = rpt_probe(spec, Cayley{f.children}, f.u, f.levels, f.tol);
  out << "level,distance\n";
  for (std::size_t i = 0; i < result.distances.size(); ++i) out << i + 1 << ',' << fmt(result.distances[i]) << '\n';
  out << "verdict," << to_string(result.verdict) << ",levels," << result.levels_used << ",u," << fmt(result.u)
      << '\n';
  return kOk;
}

inline SolutionSet solve_at(int q, double lambda1, double lambda2) {
  if (q == 4) return q4_solutions(lambda1, lambda2);
  if (q == 5) return q5_solutions(lambda1, lambda2);
  throw Error(ErrorKind::UnsupportedQ, "solve supports q = 4, 5");
}

inline int cmd_solve(int q, double lambda1, std::optional<double> lambda2, const std::string& scan, bool strict,
                     std::ostream& out, std::ostream& err) {
  if (q != 4 && q != 5) throw CLI::ValidationError("--q", "solve supports q = 4, 5");
  if (lambda2.has_value() == !scan.empty()) throw CLI::ValidationError("--lambda2", "give --lambda2 or --scan");
  const auto values = scan.empty() ? std::vector<double>{*lambda2} : parse_scan(scan);
  if (strict) {
    for (double l2 : values) {
      const std::vector<double> m{lambda1, l2};
      if (const auto r = feasibility_from_modes(q, m); !r.feasible) {
        err << "infeasible at lambda2 = " << fmt(l2) << ": " << r.violated << '\n';
        return kInfeasible;
      }
    }
  }
  out << (scan.empty() ? "" : "lambda2,") << "alpha1,alpha2,residual\n";
  for (double l2 : values) {
    const auto set = solve_at(q, lambda1, l2);
    for (std::size_t k = 0; k < set.solutions.size(); ++k) {
      if (!scan.empty()) out << fmt(l2) << ',';
      out << fmt(set.solutions[k].alpha1) << ',' << fmt(set.solutions[k].alpha2) << ',' << fmt(set.residuals[k])
          << '\n';
    }
    for (const auto& w : set.warnings) err << "note (lambda2 = " << fmt(l2) << "): " << w << '\n';
  }
  return kOk;
}

inline void classify_row(double lambda2, std::ostream& out) {
  const QuarticCoeffs c = q5_quartic_coeffs(lambda2);
  out << fmt(lambda2) << ',' << fmt(c.a) << ',' << fmt(c.b) << ',' << fmt(c.c) << ',' << fmt(c.d) << ','
      << fmt(c.e) << ',';
  const QuarticAnalysis a = classify_quartic(c);
  const auto& inv = a.invariants;
  out << fmt(inv.discriminant) << ',' << fmt(inv.p) << ',' << fmt(inv.d) << ',' << fmt(inv.delta0) << ','
      << to_string(a.structure) << ',' << a.real_roots.size() << ',';
  for (std::size_t k = 0; k < a.real_roots.size(); ++k) {
    if (k) out << ';';
    out << fmt(a.real_roots[k].value);
    if (a.real_roots[k].multiplicity > 1) out << 'x' << a.real_roots[k].multiplicity;
  }
  out << '\n';
}

inline int cmd_classify(std::optional<double> lambda2, const std::string& scan, std::ostream& out) {
  if (lambda2.has_value() == !scan.empty()) throw CLI::ValidationError("--lambda2", "give --lambda2 or --scan");
  out << "lambda2,a,b,c,d,e,Delta,P,D,Delta0,structure,n_real,roots\n";
  for (double l2 : scan.empty() ? std::vector<double>{*lambda2} : parse_scan(scan)) classify_row(l2, out);
  return kOk;
}

struct SweepFlags {
  int q = 4;
  int res = 100;
  double l1min = 0.0, l1max = 0.6, l2min = 0.0, l2max = 0.6;
  std::string svg;
  std::string output;
  unsigned threads = 0;
};

inline std::vector<std::pair<double, double>> critical_overlay(int q, const Range& x, const Range& y) {
  std::vector<std::pair<double, double>> line;
  if (q == 4) {
    for (int k = 0; k <= 400; ++k) {
      const double l2 = y.lo + (y.hi - y.lo) * k / 400.0;
      const double l1 = q4_critical_line(l2);
      if (l2 > 0.0 && l1 >= x.lo && l1 <= x.hi) line.emplace_back(l1, l2);
    }
  } else {
    std::vector<double> grid;
    for (int k = 0; k <= 20; ++k) {
      const double l1 = kLineDomainLo + (0.5 - kLineDomainLo) * k / 20.0;
      if (l1 >= x.lo && l1 <= x.hi) grid.push_back(l1);
    }
    if (!grid.empty()) {
      for (const auto& tp : q5_transition_line(grid)) {
        if (tp.ok && tp.lambda2c >= y.lo && tp.lambda2c <= y.hi) line.emplace_back(tp.lambda1, tp.lambda2c);
      }
    }
  }
  return line;
}

inline int cmd_sweep(const SweepFlags& f, std::ostream& out, std::ostream& err) {
  if (f.q != 4 && f.q != 5) throw CLI::ValidationError("--q", "sweep supports q = 4, 5");
  if (!(f.l1max >= f.l1min) || !(f.l2max >= f.l2min)) throw CLI::ValidationError("bounds", "max must be >= min");
  const Range x{f.l1min, f.l1max}, y{f.l2min, f.l2max};
  const auto grid = sweep(f.q, x, y, f.res, Cayley{2}, f.threads);

  std::ostringstream csv;
  csv << "lambda1,lambda2,feasible,regime,n_nontrivial\n";
  for (const auto& p : grid) {
    csv << fmt(p.lambda1) << ',' << fmt(p.lambda2) << ',' << fmt(p.feasible) << ',' << to_string(p.regime) << ','
        << p.n_nontrivial << '\n';
  }
  if (!f.output.empty()) {
    std::ofstream file(f.output, std::ios::binary);
    if (!file) throw CLI::ValidationError("--output", "cannot open " + f.output);
    file << csv.str();
  } else if (f.svg.empty()) {
    out << csv.str();
  }
  if (!f.svg.empty()) {
    const std::string title = "q = " + std::to_string(f.q) + " regimes on the binary tree";
    const std::string doc = render_svg(grid, f.res, PlotFrame{x, y}, critical_overlay(f.q, x, y), title);
    if (f.svg == "-") {
      out << doc;
    } else {
      std::ofstream file(f.svg, std::ios::binary);
      if (!file) throw CLI::ValidationError("--svg", "cannot open " + f.svg);
      file << doc;
    }
  }
  for (const auto& p : grid) {
    if (p.regime == Regime::Critical && !p.diagnostic.empty()) {
      err << "point (" << fmt(p.lambda1) << ", " << fmt(p.lambda2) << "): " << p.diagnostic << '\n';
    }
  }
  return kOk;
}

inline int cmd_potts(int q, int degree, const std::string& jacobian, std::optional<double> bl, std::ostream& out,
                     std::ostream& err) {
  if (!jacobian.empty() && bl) throw CLI::ValidationError("--jacobian", "use either --jacobian or --bl");
  if (!jacobian.empty()) {
    if (q != 5) throw CLI::ValidationError("--q", "the Jacobian profile is computed for q = 5");
    out << "lambda,alpha1,alpha2,det\n";
    int code = kOk;
    for (const auto& s : jacobian_profile(parse_scan(jacobian))) {
      if (!s.ok) {
        err << "no verified boundary law at lambda = " << fmt(s.lambda) << '\n';
        code = kSolverFailure;
        continue;
      }
      out << fmt(s.lambda) << ',' << fmt(s.root.alpha1) << ',' << fmt(s.root.alpha2) << ',' << fmt(s.det) << '\n';
    }
    return code;
  }
  if (bl) {
    const auto laws = potts_boundary_laws(q, *bl);
    out << "branch,a,alpha1,alpha2,residual,sign_convention,mode_convention,verified\n";
    if (!laws) {
      err << "no real boundary laws at lambda = " << fmt(*bl) << " (radicand negative)\n";
      return kOk;
    }
    const auto row = [&](const char* name, double a, const ModePair& m, double r) {
      out << name << ',' << fmt(a) << ',' << fmt(m.alpha1) << ',' << fmt(m.alpha2) << ',' << fmt(r) << ','
          << laws->sign_convention << ',' << laws->mode_convention << ',' << fmt(laws->verified) << '\n';
    };
    row("plus", laws->a_plus, laws->modes_plus, laws->residual_plus);
    row("minus", laws->a_minus, laws->modes_minus, laws->residual_minus);
    return laws->verified ? kOk : kSolverFailure;
  }
  const auto t = potts_thresholds(q, degree);
  out << "q,d,theta_cr,theta_rpt,lambda1\n"
      << t.q << ',' << t.d << ',' << fmt(t.theta_cr) << ',' << fmt(t.theta_rpt) << ',' << fmt(t.lambda1) << '\n';
  return kOk;
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Phase transitions of generalized clock models on trees", "clockpt"};
  app.require_subcommand(1);
  app.fallthrough(false);

  bool strict = false;

  ModelFlags matrix_model;
  auto* matrix = app.add_subcommand("matrix", "Eigenvalues, first row and feasibility of a transfer matrix");
  matrix_model.attach(matrix);
  matrix->add_flag("--strict", strict, "Exit with code 1 when the matrix is not non-increasing");

  ModelFlags probe_model;
  ProbeFlags probe_flags;
  auto* probe = app.add_subcommand("probe", "Distance of the root marginal to uniform under the all-0 boundary");
  probe_model.attach(probe);
  probe->add_option("--u", probe_flags.u, "Boundary coupling weakening in (0, 1]")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  probe->add_option("--levels", probe_flags.levels, "Number of recursion levels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  probe->add_option("--tol", probe_flags.tol, "Convergence tolerance")->check(CLI::PositiveNumber)->capture_default_str();
  probe->add_option("--children", probe_flags.children, "Children per vertex of the Cayley tree")
      ->check(CLI::Range(2, 64))
      ->capture_default_str();
  probe->add_flag("--strict", strict, "Exit with code 1 when the matrix is not non-increasing");

  int solve_q = 5;
  double solve_l1 = 0.5;
  std::optional<double> solve_l2;
  std::string solve_scan;
  auto* solve = app.add_subcommand("solve", "Fixed points of the q = 4, 5 mode map on the binary tree");
  solve->add_option("--q", solve_q, "Number of states (4 or 5)")->check(CLI::IsMember({4, 5}))->capture_default_str();
  solve->add_option("--lambda1", solve_l1, "lambda1")->capture_default_str();
  solve->add_option("--lambda2", solve_l2, "lambda2");
  solve->add_option("--scan", solve_scan, "Scan lambda2 over lo:hi:step (residual tolerance 1e-9)");
  solve->add_flag("--strict", strict, "Exit with code 1 on infeasible parameters");

  std::optional<double> classify_l2;
  std::string classify_scan;
  auto* classify = app.add_subcommand("classify", "Root structure of the q = 5 quartic at lambda1 = 1/2");
  classify->add_option("--lambda2", classify_l2, "lambda2");
  classify->add_option("--scan", classify_scan, "Scan lambda2 over lo:hi:step (zero tests 1e-12 relative)");

  SweepFlags sweep_flags;
  auto* sweep_cmd = app.add_subcommand("sweep", "Regime map of the (lambda1, lambda2) plane");
  sweep_cmd->add_option("--q", sweep_flags.q, "Number of states (4 or 5)")
      ->check(CLI::IsMember({4, 5}))
      ->capture_default_str();
  sweep_cmd->add_option("--res", sweep_flags.res, "Grid points per axis")
      ->check(CLI::Range(1, 2000))
      ->capture_default_str();
  sweep_cmd->add_option("--lambda1-min", sweep_flags.l1min, "Lower lambda1 bound")->capture_default_str();
  sweep_cmd->add_option("--lambda1-max", sweep_flags.l1max, "Upper lambda1 bound")->capture_default_str();
  sweep_cmd->add_option("--lambda2-min", sweep_flags.l2min, "Lower lambda2 bound")->capture_default_str();
  sweep_cmd->add_option("--lambda2-max", sweep_flags.l2max, "Upper lambda2 bound")->capture_default_str();
  sweep_cmd->add_option("--svg", sweep_flags.svg, "Write an SVG plot to this path ('-' for stdout)");
  sweep_cmd->add_option("--output", sweep_flags.output, "Write the CSV to this path instead of stdout");
  sweep_cmd->add_option("--threads", sweep_flags.threads, "Worker threads (0 = hardware)")->capture_default_str();

  int potts_q = 5;
  int potts_degree = 2;
  std::string potts_jacobian;
  std::optional<double> potts_bl;
  auto* potts_cmd = app.add_subcommand("potts", "Potts thresholds, boundary laws and Jacobian profile");
  potts_cmd->add_option("--q", potts_q, "Number of states")->check(CLI::Range(2, 64))->capture_default_str();
  potts_cmd->add_option("--degree", potts_degree, "Children per vertex d")
      ->check(CLI::Range(2, 1000))
      ->capture_default_str();
  potts_cmd->add_option("--jacobian", potts_jacobian, "det of the Jacobian over lambda = lo:hi:step (q = 5)");
  potts_cmd->add_option("--bl", potts_bl, "Boundary laws (a, 1, 1, 1, 1) at lambda1 = lambda2 = lambda (q = 5)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (matrix->parsed()) return cmd_matrix(matrix_model, strict, out, err);
    if (probe->parsed()) return cmd_probe(probe_model, probe_flags, strict, out, err);
    if (solve->parsed()) return cmd_solve(solve_q, solve_l1, solve_l2, solve_scan, strict, out, err);
    if (classify->parsed()) return cmd_classify(classify_l2, classify_scan, out);
    if (sweep_cmd->parsed()) return cmd_sweep(sweep_flags, out, err);
    if (potts_cmd->parsed()) return cmd_potts(potts_q, potts_degree, potts_jacobian, potts_bl, out, err);
    return kUsage;
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

}  // namespace clockpt::cli
