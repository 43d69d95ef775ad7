#pragma once

// Fixed points of the binary-tree mode maps: closed forms for q = 4, the
// quartic elimination for q = 5 at lambda1 = 1/2, damped Newton on the
// displacement map T(alpha) = alpha - F5(alpha), and Potts boundary laws.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "clockpt/error.hpp"
#include "clockpt/numeric.hpp"
#include "clockpt/quartic.hpp"
#include "clockpt/recursion.hpp"
#include "clockpt/spectral.hpp"

namespace clockpt {

inline constexpr double kResidualTol = 1e-9;
inline constexpr double kDedupTol = 1e-8;
inline constexpr double kNontrivialTol = 1e-6;

// ---------------------------------------------------------------------------
// q = 5 quartic at lambda1 = 1/2

/// Coefficients of the quartic factor q_{lambda2}(alpha1).
struct QuarticCoeffs : Quartic {
  double lambda2 = 0.0;
};

inline QuarticCoeffs q5_quartic_coeffs(double lambda2) {
  const double s10 = std::sqrt(10.0);
  const double l2 = lambda2 * lambda2, l3 = l2 * lambda2, l4 = l3 * lambda2;
  QuarticCoeffs c;
  c.lambda2 = lambda2;
  c.a = numeric::compensated_sum({125.0 * l2 / 2.0, 200.0 * l3, 250.0 * l4});
  c.b = numeric::compensated_sum({-20.0 * s10 * l2, -75.0 * s10 * l3, 125.0 * s10 * l4});
  c.c = numeric::compensated_sum({140.0 * l2, -345.0 * l3, 75.0 * l4});
  c.d = numeric::compensated_sum({-16.0 * s10 * l2, 64.0 * s10 * l3, -125.0 * std::sqrt(2.5) * l4});
  c.e = numeric::compensated_sum({8.0 * l2, -36.0 * l3, 40.0 * l4});
  return c;
}

inline double q5_P3(double alpha1, double lambda2) {
  const double v = kQ5V;
  const double x = alpha1, xv = alpha1 - v;
  return numeric::compensated_sum({4.0 * lambda2 * xv * xv, -5.0 * lambda2 * v * x * x * xv,
                                   20.0 * lambda2 * v * v * x * x, -8.0 * lambda2 * lambda2 * xv * xv,
                                   -20.0 * lambda2 * lambda2 * v * x * xv * xv});
}

inline double q5_P4(double alpha1, double lambda2) {
  const double v = kQ5V;
  const double x = alpha1, xv = alpha1 - v;
  return 5.0 * v * x * x * x * x + 5.0 * v * lambda2 * x * x * xv * xv;
}

/// 5 a^3 P3^2 + 20 l^2 P4^2 a - 20 l v a P3 P4 - 20 v l^2 P4^2 at a = alpha1.
inline double q5_eliminated_polynomial(double alpha1, double lambda2) {
  const double v = kQ5V;
  const double p3 = q5_P3(alpha1, lambda2), p4 = q5_P4(alpha1, lambda2);
  const double l2 = lambda2 * lambda2;
  return numeric::compensated_sum({5.0 * alpha1 * alpha1 * alpha1 * p3 * p3, 20.0 * l2 * p4 * p4 * alpha1,
                                   -20.0 * lambda2 * v * alpha1 * p3 * p4, -20.0 * v * l2 * p4 * p4});
}

/// alpha2 = P4(alpha1) / P3(alpha1), the second mode on the quartic branch.
inline double q5_alpha2_from_alpha1(double alpha1, double lambda2) {
  const double v = kQ5V;
  if (std::abs(alpha1 - v) < 1e-12) {
    throw Error(ErrorKind::AtSpecialPoint, "alpha1 = v; the elimination divides by zero there");
  }
  const double x = alpha1, xv = alpha1 - v;
  const double scale = std::abs(4.0 * lambda2 * xv * xv) + std::abs(5.0 * lambda2 * v * x * x * xv) +
                       std::abs(20.0 * lambda2 * v * v * x * x) + std::abs(8.0 * lambda2 * lambda2 * xv * xv) +
                       std::abs(20.0 * lambda2 * lambda2 * v * x * xv * xv);
  const double p3 = q5_P3(alpha1, lambda2);
  if (std::abs(p3) <= 1e-12 * scale) {
    throw Error(ErrorKind::P3Vanishes, "P3 vanishes: only the trivial solution on this branch");
  }
  return q5_P4(alpha1, lambda2) / p3;
}

/// lambda2 at which alpha1 = v carries a solution of its own.
inline double q5_special_lambda2() {
  const double v = kQ5V, v3 = v * v * v;
  return (0.2 * v + 0.25 * v3 + v3 / 16.0) / (0.4 * v + 2.0 * v3);
}

inline std::optional<ModePair> q5_special_case(double lambda2, double tol = 1e-9) {
  if (std::abs(lambda2 - q5_special_lambda2()) >= tol) return std::nullopt;
  return ModePair{kQ5V, kQ5V / (4.0 * lambda2)};
}

// ---------------------------------------------------------------------------
// Solution sets

struct SolutionSet {
  int q = 5;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  std::vector<ModePair> solutions;  // trivial first, then ascending alpha1
  std::vector<double> residuals;
  bool includes_trivial = false;
  std::vector<std::string> warnings;

  int n_nontrivial() const {
    return static_cast<int>(std::count_if(solutions.begin(), solutions.end(), [](const ModePair& a) {
      return std::max(std::abs(a.alpha1), std::abs(a.alpha2)) > kNontrivialTol;
    }));
  }
};

namespace detail {

inline bool same_point(const ModePair& a, const ModePair& b) { return sup_distance(a, b) <= kDedupTol; }

inline std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Residual- and probability-verifies candidates, drops duplicates, and sorts.
inline SolutionSet assemble(int q, double lambda1, double lambda2, const std::vector<ModePair>& candidates,
                            std::vector<std::string> warnings) {
  SolutionSet set;
  set.q = q;
  set.lambda1 = lambda1;
  set.lambda2 = lambda2;
  set.warnings = std::move(warnings);
  std::vector<ModePair> kept{ModePair{}};
  for (const auto& c : candidates) {
    if (!std::isfinite(c.alpha1) || !std::isfinite(c.alpha2)) continue;
    const double res = fixed_point_residual(q, lambda1, lambda2, c);
    const double modes[2] = {c.alpha1, c.alpha2};
    if (!(res < kResidualTol)) {
      set.warnings.push_back("discarded (" + fmt(c.alpha1) + ", " + fmt(c.alpha2) + "): residual " + fmt(res));
      continue;
    }
    if (!SymmetricDist::is_probability(q, modes)) {
      set.warnings.push_back("discarded (" + fmt(c.alpha1) + ", " + fmt(c.alpha2) + "): not a probability vector");
      continue;
    }
    if (std::none_of(kept.begin(), kept.end(), [&](const ModePair& k) { return same_point(k, c); })) {
      kept.push_back(c);
    }
  }
  std::sort(kept.begin() + 1, kept.end(), [](const ModePair& x, const ModePair& y) {
    return x.alpha1 != y.alpha1 ? x.alpha1 < y.alpha1 : x.alpha2 < y.alpha2;
  });
  set.solutions = std::move(kept);
  set.includes_trivial = true;
  for (const auto& s : set.solutions) set.residuals.push_back(fixed_point_residual(q, lambda1, lambda2, s));
  return set;
}

inline bool at_half(double lambda1) { return std::abs(lambda1 - 0.5) < 1e-12; }

}  // namespace detail

/// All fixed points of F5 at lambda1 = 1/2: the trivial one, the quartic
/// branch through P4/P3, and the special alpha1 = v solution.
inline SolutionSet q5_solutions_at_critical(double lambda2) {
  std::vector<ModePair> candidates;
  std::vector<std::string> warnings;
  const QuarticCoeffs coeffs = q5_quartic_coeffs(lambda2);
  if (!coeffs.vanishes()) {
    const QuarticAnalysis analysis = classify_quartic(coeffs);
    for (const auto& root : analysis.real_roots) {
      try {
        candidates.push_back({root.value, q5_alpha2_from_alpha1(root.value, lambda2)});
      } catch (const Error& e) {
        warnings.push_back("root " + detail::fmt(root.value) + ": " + std::string(to_string(e.kind())));
      }
    }
  }
  if (auto special = q5_special_case(lambda2)) candidates.push_back(*special);
  return detail::assemble(5, 0.5, lambda2, candidates, std::move(warnings));
}

/// Closed-form fixed points of F4.
inline SolutionSet q4_solutions(double lambda1, double lambda2) {
  std::vector<ModePair> candidates;
  std::vector<std::string> warnings;
  const std::vector<double> independent{lambda1, lambda2};
  if (const auto report = feasibility_from_modes(4, independent); !report.feasible) {
    warnings.push_back("infeasible parameters: " + report.violated);
  }

  const auto push_pm = [&](double p1, double alpha2) {
    if (!(p1 > 0.0)) return;
    const double a1 = std::sqrt(p1) / lambda1;
    candidates.push_back({a1, alpha2});
    candidates.push_back({-a1, alpha2});
  };

  if (detail::at_half(lambda1)) {
    if (lambda2 != 0.0) {
      const double alpha2 = (3.0 * lambda2 - 1.0) / (2.0 * (lambda2 + lambda2 * lambda2));
      const double rad = 2.0 * lambda2 * alpha2 - 4.0 * lambda2 * lambda2 * alpha2 * alpha2;
      if (rad > 0.0) {
        candidates.push_back({std::sqrt(rad), alpha2});
        candidates.push_back({-std::sqrt(rad), alpha2});
      }
    }
  } else if (lambda1 != 0.0) {
    // alpha1 != 0: intersect alpha1^2 lambda1^2 = P1(alpha2) with the second equation
    const double qa = 2.0 * lambda1 * lambda2 + lambda2 * lambda2;
    const double qb = lambda1 - lambda2 - lambda1 * lambda2;
    const double qc = -(0.5 * lambda1 - 0.25);
    std::vector<double> alpha2s;
    if (std::abs(qa) < 1e-300) {
      if (qb != 0.0) alpha2s.push_back(-qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0.0) {
        const double sq = std::sqrt(disc);
        // numerically stable pair
        const double t = -0.5 * (qb + std::copysign(sq, qb));
        if (t != 0.0) {
          alpha2s.push_back(t / qa);
          alpha2s.push_back(qc / t);
        } else {
          alpha2s.push_back(0.0);
        }
      }
    }
    for (double alpha2 : alpha2s) {
      const double p1 = 0.5 * lambda1 + lambda1 * lambda2 * alpha2 - 0.25 - lambda2 * lambda2 * alpha2 * alpha2;
      push_pm(p1, alpha2);
    }
  }

  // alpha1 = 0 branch
  if (lambda2 > 0.5) {
    const double alpha2 = std::sqrt(0.5 * lambda2 - 0.25) / lambda2;
    candidates.push_back({0.0, alpha2});
    candidates.push_back({0.0, -alpha2});
  }
  return detail::assemble(4, lambda1, lambda2, candidates, std::move(warnings));
}

// ---------------------------------------------------------------------------
// Newton on T = id - F5

struct Jacobian {
  double m[2][2] = {{0.0, 0.0}, {0.0, 0.0}};
  double det = 0.0;
};

inline ModePair T_map(double lambda1, double lambda2, const ModePair& a) {
  const ModePair f = mode_map_F5(lambda1, lambda2, a);
  return {a.alpha1 - f.alpha1, a.alpha2 - f.alpha2};
}

/// Analytic Jacobian of T by the quotient rule.
inline Jacobian jacobian_T(double lambda1, double lambda2, const ModePair& a) {
  const double v = kQ5V;
  const double x = a.alpha1, y = a.alpha2;
  const double l1 = lambda1, l2 = lambda2;
  const double n1 = 0.4 * l1 * x + 2.0 * l1 * l2 * v * x * y + v * l2 * l2 * y * y;
  const double n2 = 0.4 * l2 * y + 2.0 * l1 * l2 * v * x * y + v * l1 * l1 * x * x;
  const double den = 0.2 + l1 * l1 * x * x + l2 * l2 * y * y;
  const double dn1[2] = {0.4 * l1 + 2.0 * l1 * l2 * v * y, 2.0 * l1 * l2 * v * x + 2.0 * v * l2 * l2 * y};
  const double dn2[2] = {2.0 * l1 * l2 * v * y + 2.0 * v * l1 * l1 * x, 0.4 * l2 + 2.0 * l1 * l2 * v * x};
  const double dd[2] = {2.0 * l1 * l1 * x, 2.0 * l2 * l2 * y};
  Jacobian j;
  for (int k = 0; k < 2; ++k) {
    j.m[0][k] = (k == 0 ? 1.0 : 0.0) - (dn1[k] * den - n1 * dd[k]) / (den * den);
    j.m[1][k] = (k == 1 ? 1.0 : 0.0) - (dn2[k] * den - n2 * dd[k]) / (den * den);
  }
  j.det = j.m[0][0] * j.m[1][1] - j.m[0][1] * j.m[1][0];
  return j;
}

struct NewtonOptions {
  bool damping = true;
  int max_iter = 100;
  double tol = 1e-12;
};

struct NewtonResult {
  std::optional<ModePair> root;
  int iterations = 0;
  std::string diagnostic;
};

namespace detail {

inline double sup_norm(const ModePair& a) { return std::max(std::abs(a.alpha1), std::abs(a.alpha2)); }

inline std::optional<ModePair> newton_step(double lambda1, double lambda2, const ModePair& a, const ModePair& t) {
  const Jacobian j = jacobian_T(lambda1, lambda2, a);
  if (!std::isfinite(j.det) || std::abs(j.det) < 1e-300) return std::nullopt;
  return ModePair{-(j.m[1][1] * t.alpha1 - j.m[0][1] * t.alpha2) / j.det,
                  -(-j.m[1][0] * t.alpha1 + j.m[0][0] * t.alpha2) / j.det};
}

}  // namespace detail

/// Damped Newton for T(alpha) = 0. Once the residual is below tol the point
/// is polished with three further steps; a root that keeps drifting by more
/// than 1e-3 of its size (slow convergence onto a degenerate root) is rejected.
inline NewtonResult newton_T(double lambda1, double lambda2, const ModePair& seed, const NewtonOptions& opts = {}) {
  NewtonResult out;
  ModePair a = seed;
  for (int it = 0; it <= opts.max_iter; ++it) {
    out.iterations = it;
    const ModePair t = T_map(lambda1, lambda2, a);
    const double norm = detail::sup_norm(t);
    if (!std::isfinite(norm)) {
      out.diagnostic = "non-finite iterate";
      return out;
    }
    if (norm < opts.tol) {
      double drift = 0.0;
      ModePair polished = a;
      for (int k = 0; k < 3; ++k) {
        const ModePair tk = T_map(lambda1, lambda2, polished);
        if (detail::sup_norm(tk) == 0.0) break;
        const auto step = detail::newton_step(lambda1, lambda2, polished, tk);
        if (!step) break;
        polished = {polished.alpha1 + step->alpha1, polished.alpha2 + step->alpha2};
        drift += detail::sup_norm(*step);
      }
      if (drift > 1e-3 * detail::sup_norm(polished) + 1e-15) {
        out.diagnostic = "sub-quadratic convergence onto a degenerate root";
        return out;
      }
      if (detail::sup_norm(T_map(lambda1, lambda2, polished)) <= norm) a = polished;
      out.root = a;
      return out;
    }
    if (it == opts.max_iter) break;
    const auto step = detail::newton_step(lambda1, lambda2, a, t);
    if (!step) {
      out.diagnostic = std::string(to_string(ErrorKind::SingularJacobian));
      return out;
    }
    double s = 1.0;
    if (opts.damping) {
      while (s > 1e-6) {
        const ModePair trial{a.alpha1 + s * step->alpha1, a.alpha2 + s * step->alpha2};
        const double tn = detail::sup_norm(T_map(lambda1, lambda2, trial));
        if (std::isfinite(tn) && tn <= (1.0 - 1e-4 * s) * norm) break;
        s *= 0.5;
      }
    }
    a = {a.alpha1 + s * step->alpha1, a.alpha2 + s * step->alpha2};
  }
  out.diagnostic = "no convergence within max_iter";
  return out;
}

inline constexpr int kSeedGrid = 13;
inline constexpr double kSeedRadius = 0.55;

/// All fixed points of F5 found by multistart Newton over a 13 x 13 seed
/// grid on [-0.55, 0.55]^2. At lambda1 = 1/2 the quartic route is used
/// instead, since T is cubic at the origin there.
inline SolutionSet q5_solutions(double lambda1, double lambda2, const std::vector<ModePair>& extra_seeds = {}) {
  if (detail::at_half(lambda1)) return q5_solutions_at_critical(lambda2);
  std::vector<ModePair> candidates;
  std::vector<ModePair> seeds = extra_seeds;
  for (int i = 0; i < kSeedGrid; ++i) {
    for (int j = 0; j < kSeedGrid; ++j) {
      seeds.push_back({-kSeedRadius + 2.0 * kSeedRadius * i / (kSeedGrid - 1),
                       -kSeedRadius + 2.0 * kSeedRadius * j / (kSeedGrid - 1)});
    }
  }
  for (const auto& seed : seeds) {
    const auto r = newton_T(lambda1, lambda2, seed);
    if (r.root && detail::sup_norm(*r.root) > kNontrivialTol) candidates.push_back(*r.root);
  }
  return detail::assemble(5, lambda1, lambda2, candidates, {});
}

/// Tracks roots from lambda1 = from to lambda1 = to in steps of at most
/// `step`, re-solving with Newton at each stop. Roots that fail to converge
/// or collapse to the origin are dropped.
inline std::vector<ModePair> continue_in_lambda1(double lambda2, double from, double to, std::vector<ModePair> roots,
                                                 double step = 0.005) {
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidArgument, "continuation step must be positive");
  const int n = std::max(1, static_cast<int>(std::ceil(std::abs(to - from) / step - 1e-9)));
  for (int i = 1; i <= n && !roots.empty(); ++i) {
    const double lambda1 = from + (to - from) * i / n;
    std::vector<ModePair> next;
    for (const auto& r : roots) {
      const auto res = newton_T(lambda1, lambda2, r);
      if (!res.root || detail::sup_norm(*res.root) <= kNontrivialTol) continue;
      if (std::none_of(next.begin(), next.end(), [&](const ModePair& k) { return detail::same_point(k, *res.root); })) {
        next.push_back(*res.root);
      }
    }
    roots = std::move(next);
  }
  return roots;
}

// ---------------------------------------------------------------------------
// Potts boundary laws

struct PottsBoundaryLaws {
  double theta = 0.0;
  double a_plus = 0.0;
  double a_minus = 0.0;
  ModePair modes_plus;
  ModePair modes_minus;
  double residual_plus = 0.0;
  double residual_minus = 0.0;
  bool verified = false;
  std::string sign_convention;  // "printed" (1 - theta) or "flipped" (theta - 1)
  std::string mode_convention;  // which a -> modes map verified
};

namespace detail {

struct ModeConvention {
  const char* name;
  double (*map)(double);
};

inline double modes_linear(double a) { return 2.0 * (1.0 - a) / 5.0; }
inline double modes_ratio_squared(double a) {
  return (a * a - 1.0) / (std::sqrt(2.5) * (a * a + 4.0));
}
inline double modes_ratio(double a) { return (a - 1.0) / (std::sqrt(2.5) * (a + 4.0)); }

}  // namespace detail

/// Boundary laws l = (a, 1, 1, 1, 1) on the Potts diagonal lambda1 = lambda2
/// = lambda. Empty when the radicand is negative (lambda below 4/9). Each
/// sign convention and each a -> modes map is tried in turn and accepted only
/// if both values are positive and both images are T-roots with residual
/// below 1e-9.
inline std::optional<PottsBoundaryLaws> potts_boundary_laws(int q, double lambda) {
  if (q != 5) throw Error(ErrorKind::UnsupportedQ, "Potts boundary laws are analyzed for q = 5");
  const double theta = potts_theta_from_lambda(q, lambda);
  const double qm = static_cast<double>(q - 1);
  double rad = 5.0 - 4.0 * q - 2.0 * theta + theta * theta;
  if (rad < 0.0) {
    if (rad < -1e-12 * std::max(1.0, theta * theta)) return std::nullopt;
    rad = 0.0;
  }
  const double root = std::sqrt(rad);
  static constexpr detail::ModeConvention kMaps[] = {
      {"2(1-a)/5", &detail::modes_linear},
      {"(a^2-1)/(c(a^2+4))", &detail::modes_ratio_squared},
      {"(a-1)/(c(a+4))", &detail::modes_ratio},
  };
  PottsBoundaryLaws out;
  out.theta = theta;
  for (const double sign : {1.0, -1.0}) {
    const double lead = sign * (1.0 - theta) / (2.0 * qm);
    const double a_plus = 1.0 / (lead + root / (2.0 * qm));
    const double a_minus = 1.0 / (lead - root / (2.0 * qm));
    for (const auto& conv : kMaps) {
      const double sp = conv.map(a_plus), sm = conv.map(a_minus);
      const ModePair mp{sp, sp}, mm{sm, sm};
      const double rp = detail::sup_norm(T_map(lambda, lambda, mp));
      const double rm = detail::sup_norm(T_map(lambda, lambda, mm));
      const double mpv[2] = {sp, sp}, mmv[2] = {sm, sm};
      const bool ok = a_plus > 0.0 && a_minus > 0.0 && rp < kResidualTol && rm < kResidualTol && SymmetricDist::is_probability(5, mpv) &&
                      SymmetricDist::is_probability(5, mmv);
      if (!out.verified || ok) {
        out.a_plus = a_plus;
        out.a_minus = a_minus;
        out.modes_plus = mp;
        out.modes_minus = mm;
        out.residual_plus = rp;
        out.residual_minus = rm;
        out.sign_convention = sign > 0 ? "printed" : "flipped";
        out.mode_convention = conv.name;
        out.verified = ok;
      }
      if (ok) return out;
    }
  }
  return out;
}

/// The boundary-law T-root closer to the origin, polished by Newton.
inline std::optional<ModePair> potts_lower_branch(double lambda) {
  const auto laws = potts_boundary_laws(5, lambda);
  if (!laws || !laws->verified) return std::nullopt;
  const ModePair lower =
      detail::sup_norm(laws->modes_plus) <= detail::sup_norm(laws->modes_minus) ? laws->modes_plus : laws->modes_minus;
  const auto polished = newton_T(lambda, lambda, lower);
  return polished.root ? polished.root : std::optional<ModePair>(lower);
}

}  // namespace clockpt
