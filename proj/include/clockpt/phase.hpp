#pragma once

// Phase diagrams in the (lambda1, lambda2) plane: critical lines, regime
// classification on the binary tree, Potts thresholds and parallel sweeps.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "clockpt/error.hpp"
#include "clockpt/fixedpoint.hpp"
#include "clockpt/quartic.hpp"
#include "clockpt/recursion.hpp"
#include "clockpt/spectral.hpp"
#include "clockpt/tree.hpp"

namespace clockpt {

/// lambda1 on the q = 4 transition line as a function of lambda2.
inline double q4_critical_line(double lambda2) {
  return 4.0 * lambda2 * (1.0 - lambda2) / ((1.0 + lambda2) * (1.0 + lambda2));
}

/// Inverse of the q = 4 line on its decreasing branch (lambda2 >= 1/3): the
/// PT threshold in lambda2 for a given lambda1 in (0, 1/2].
inline double q4_critical_lambda2(double lambda1) {
  if (!(lambda1 > 0.0 && lambda1 <= 0.5)) {
    throw Error(ErrorKind::InvalidArgument, "lambda1 must lie in (0, 1/2]");
  }
  return ((2.0 - lambda1) + 2.0 * std::sqrt(std::max(0.0, 1.0 - 2.0 * lambda1))) / (lambda1 + 4.0);
}

enum class Regime { Infeasible, NoPT, PTAndRPT, PTNotRPT, Critical };
enum class Evidence { ClosedForm, Newton, Probe };

constexpr std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Infeasible: return "INFEASIBLE";
    case Regime::NoPT: return "NO_PT";
    case Regime::PTAndRPT: return "PT_AND_RPT";
    case Regime::PTNotRPT: return "PT_NOT_RPT";
    case Regime::Critical: return "CRITICAL";
  }
  return "CRITICAL";
}

constexpr std::string_view to_string(Evidence e) {
  switch (e) {
    case Evidence::ClosedForm: return "CLOSED_FORM";
    case Evidence::Newton: return "NEWTON";
    case Evidence::Probe: return "PROBE";
  }
  return "PROBE";
}

struct PhasePoint {
  int q = 4;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  bool feasible = false;
  Regime regime = Regime::NoPT;
  int n_nontrivial = 0;
  Evidence evidence = Evidence::ClosedForm;
  bool at_rpt_threshold = false;  // |lambda1 br - 1| < 1e-9
  std::string diagnostic;
};

inline constexpr double kCriticalBand = 1e-9;

/// Regime of (lambda1, lambda2) on the binary tree. PT means a verified
/// nontrivial symmetric fixed point of the mode map; RPT is decided by
/// lambda1 br against 1. Exactly at lambda1 br = 1 there is no RPT, so the
/// regime follows PT alone there and the point is flagged. CRITICAL is kept
/// for threshold points whose PT question could not be settled.
inline PhasePoint classify_point(int q, double lambda1, double lambda2, const TreeFamily& tree = Cayley{2}) {
  if (q != 4 && q != 5) throw Error(ErrorKind::UnsupportedQ, "regimes are mapped for q = 4, 5 only");
  if (cayley_children(tree) != 2) {
    throw Error(ErrorKind::UnsupportedTree, "regime maps use the binary tree");
  }
  const double br = branching_number(tree).value;
  PhasePoint pt;
  pt.q = q;
  pt.lambda1 = lambda1;
  pt.lambda2 = lambda2;
  const std::vector<double> independent{lambda1, lambda2};
  const auto report = feasibility_from_modes(q, independent);
  pt.feasible = report.feasible;
  pt.diagnostic = report.violated;
  pt.at_rpt_threshold = std::abs(lambda1 * br - 1.0) < kCriticalBand;

  bool settled = true;
  try {
    if (q == 4) {
      pt.n_nontrivial = q4_solutions(lambda1, lambda2).n_nontrivial();
      pt.evidence = Evidence::ClosedForm;
    } else if (std::abs(lambda1 - 0.5) < 1e-12) {
      pt.n_nontrivial = q5_solutions_at_critical(lambda2).n_nontrivial();
      pt.evidence = Evidence::ClosedForm;
    } else {
      pt.n_nontrivial = q5_solutions(lambda1, lambda2).n_nontrivial();
      pt.evidence = Evidence::Newton;
    }
  } catch (const Error& e) {
    pt.evidence = Evidence::Probe;
    pt.diagnostic = std::string(e.what());
    try {
      const auto probe = pt_probe(TransferSpec::from_modes(q, independent), tree);
      if (probe.verdict == Verdict::BoundedAway) {
        pt.n_nontrivial = 1;
      } else if (probe.verdict == Verdict::ConvergesToUniform) {
        pt.n_nontrivial = 0;
      } else {
        settled = false;
      }
    } catch (const Error& inner) {
      settled = false;
      pt.diagnostic += std::string("; ") + inner.what();
    }
  }

  if (!pt.feasible) {
    pt.regime = Regime::Infeasible;
  } else if (!settled) {
    pt.regime = Regime::Critical;
  } else if (!pt.at_rpt_threshold && lambda1 * br > 1.0) {
    pt.regime = Regime::PTAndRPT;
  } else {
    pt.regime = pt.n_nontrivial > 0 ? Regime::PTNotRPT : Regime::NoPT;
  }
  return pt;
}

// ---------------------------------------------------------------------------
// q = 5 transition line

struct TransitionPoint {
  double lambda1 = 0.0;
  double lambda2c = 0.0;
  bool ok = false;
  Evidence evidence = Evidence::Newton;
  std::string diagnostic;
};

struct TransitionLineOptions {
  double tol = 1e-6;
  double lambda2_lo = 0.0;
  double lambda2_hi = 0.6;
  bool allow_wide_range = false;  // lambda1 below 0.4
};

inline constexpr double kLineDomainLo = 0.4;

/// Sign change of the quartic discriminant on (lo, hi), by bisection.
inline double q5_discriminant_root(double lo, double hi, double tol = 1e-12) {
  const auto sgn = [](double l2) { return quartic_invariants(q5_quartic_coeffs(l2)).discriminant > 0.0; };
  const bool s_lo = sgn(lo);
  if (s_lo == sgn(hi)) throw Error(ErrorKind::InvalidArgument, "discriminant does not change sign on the bracket");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (sgn(mid) == s_lo ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// The q = 5 transition line lambda2c(lambda1): for each lambda1 the smallest
/// lambda2 with a nontrivial fixed point, by bisection. At lambda1 = 1/2 the
/// value is the first discriminant root. Elsewhere existence is decided by
/// Newton seeded from the lambda1 = 1/2 solutions carried over by
/// continuation, with a seed grid as fallback.
inline std::vector<TransitionPoint> q5_transition_line(std::vector<double> lambda1_grid,
                                                       const TransitionLineOptions& opts = {}) {
  for (double l1 : lambda1_grid) {
    const double lo = opts.allow_wide_range ? 0.0 : kLineDomainLo;
    if (!(l1 > 0.0 && l1 >= lo && l1 <= 0.5)) {
      throw Error(ErrorKind::InvalidArgument, "lambda1 outside the supported line domain");
    }
  }
  const auto exists = [](double l1, double l2) {
    std::vector<ModePair> seeds;
    const auto anchor = q5_solutions_at_critical(l2);
    for (const auto& s : anchor.solutions) {
      if (detail::sup_norm(s) > kNontrivialTol) seeds.push_back(s);
    }
    seeds = continue_in_lambda1(l2, 0.5, l1, std::move(seeds));
    if (!seeds.empty()) return true;
    return q5_solutions(l1, l2).n_nontrivial() > 0;
  };

  std::vector<TransitionPoint> out(lambda1_grid.size());
  std::vector<std::size_t> order(lambda1_grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return lambda1_grid[a] > lambda1_grid[b]; });
  for (std::size_t idx : order) {
    const double l1 = lambda1_grid[idx];
    TransitionPoint& tp = out[idx];
    tp.lambda1 = l1;
    if (std::abs(l1 - 0.5) < 1e-12) {
      tp.lambda2c = q5_discriminant_root(0.30, 0.40);
      tp.ok = true;
      tp.evidence = Evidence::ClosedForm;
      continue;
    }
    double lo = opts.lambda2_lo, hi = opts.lambda2_hi;
    if (!exists(l1, hi)) {
      tp.diagnostic = std::string(to_string(ErrorKind::ContinuationLost)) + ": no nontrivial solution at the upper bracket";
      continue;
    }
    if (exists(l1, lo)) {
      tp.diagnostic = "nontrivial solution already at the lower bracket";
      continue;
    }
    while (hi - lo > opts.tol) {
      const double mid = 0.5 * (lo + hi);
      (exists(l1, mid) ? hi : lo) = mid;
    }
    tp.lambda2c = 0.5 * (lo + hi);
    tp.ok = true;
    tp.evidence = Evidence::Newton;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Potts

struct PottsThresholds {
  int q = 0;
  int d = 0;
  double theta_cr = 0.0;
  double theta_rpt = 0.0;
  double lambda1 = 0.0;
};

/// On Cayley(d): theta_cr = (d + q - 1)/(d - 1) equals theta_RPT, where
/// lambda1 = (theta - 1)/(theta + q - 1) = 1/d.
inline PottsThresholds potts_thresholds(int q, int d) {
  if (q < 2 || d < 2) throw Error(ErrorKind::InvalidArgument, "need q >= 2 and d >= 2");
  PottsThresholds t;
  t.q = q;
  t.d = d;
  t.theta_cr = static_cast<double>(d + q - 1) / static_cast<double>(d - 1);
  // lambda1 br = 1 solved for theta
  t.theta_rpt = (1.0 + static_cast<double>(q - 1) / d) / (1.0 - 1.0 / d);
  t.lambda1 = (t.theta_cr - 1.0) / (t.theta_cr + q - 1.0);
  return t;
}

/// lambda1 = lambda2 at which the q-state Potts model on the binary tree
/// starts a (non-robust) phase transition.
inline double potts_critical_lambda(int q) {
  const double s = 2.0 * std::sqrt(static_cast<double>(q - 1));
  return s / (q + s);
}

// ---------------------------------------------------------------------------
// Sweeps

struct Range {
  double lo = 0.0;
  double hi = 0.6;
};

inline double grid_value(const Range& r, int i, int n) {
  return n == 1 ? r.lo : r.lo + (r.hi - r.lo) * static_cast<double>(i) / static_cast<double>(n - 1);
}

/// classify_point on a res x res grid, lambda1 outer and lambda2 inner.
/// Points are evaluated concurrently; the result is in grid order.
inline std::vector<PhasePoint> sweep(int q, Range lambda1_range, Range lambda2_range, int resolution,
                                     const TreeFamily& tree = Cayley{2}, unsigned threads = 0) {
  if (resolution < 1) throw Error(ErrorKind::InvalidArgument, "resolution must be positive");
  if (q != 4 && q != 5) throw Error(ErrorKind::UnsupportedQ, "regimes are mapped for q = 4, 5 only");
  const std::size_t n = static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  std::vector<PhasePoint> out(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t k = next++; k < n; k = next++) {
      const int i = static_cast<int>(k / static_cast<std::size_t>(resolution));
      const int j = static_cast<int>(k % static_cast<std::size_t>(resolution));
      const double l1 = grid_value(lambda1_range, i, resolution);
      const double l2 = grid_value(lambda2_range, j, resolution);
      try {
        out[k] = classify_point(q, l1, l2, tree);
      } catch (const std::exception& e) {
        PhasePoint p;
        p.q = q;
        p.lambda1 = l1;
        p.lambda2 = l2;
        p.regime = Regime::Critical;
        p.diagnostic = e.what();
        out[k] = p;
      }
    }
  };
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  return out;
}

// ---------------------------------------------------------------------------
// Jacobian along the Potts diagonal

struct JacobianSample {
  double lambda = 0.0;
  ModePair root;
  double det = 0.0;
  bool ok = false;
};

/// det of the Jacobian of T at the lower Potts boundary-law root for each lambda.
inline std::vector<JacobianSample> jacobian_profile(const std::vector<double>& lambdas) {
  std::vector<JacobianSample> out;
  for (double l : lambdas) {
    JacobianSample s;
    s.lambda = l;
    if (const auto root = potts_lower_branch(l)) {
      s.root = *root;
      s.det = jacobian_T(l, l, *root).det;
      s.ok = true;
    }
    out.push_back(s);
  }
  return out;
}

}  // namespace clockpt
