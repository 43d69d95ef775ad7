#pragma once

// Tree recursion for root marginals, its closed mode-space form on the binary
// tree for q = 4, 5, and numerical probes of (robust) phase transitions.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clockpt/error.hpp"
#include "clockpt/numeric.hpp"
#include "clockpt/spectral.hpp"
#include "clockpt/tree.hpp"

namespace clockpt {

/// The two NORMALIZED Fourier modes of a symmetric distribution for q = 4, 5.
struct ModePair {
  double alpha1 = 0.0;
  double alpha2 = 0.0;

  friend bool operator==(const ModePair&, const ModePair&) = default;
};

inline double sup_distance(const ModePair& a, const ModePair& b) {
  return std::max(std::abs(a.alpha1 - b.alpha1), std::abs(a.alpha2 - b.alpha2));
}

inline constexpr double kUnderflowFloor = 1e-300;

namespace detail {

inline std::vector<double> normalize_or_throw(std::vector<double> p) {
  numeric::CompensatedSum z;
  for (double x : p) z += x;
  if (!(z.value() >= kUnderflowFloor)) {
    throw Error(ErrorKind::NormalizationUnderflow, "unnormalized marginal sums below 1e-300");
  }
  for (double& x : p) x /= z.value();
  return p;
}

inline double uniform_distance(std::span<const double> p) {
  const double u = 1.0 / static_cast<double>(p.size());
  double d = 0.0;
  for (double x : p) d = std::max(d, std::abs(x - u));
  return d;
}

}  // namespace detail

/// p(i) proportional to prod_l sum_j M(i, j) p_l(j), evaluated pointwise.
inline SymmetricDist recursion_step(const TransferSpec& spec, std::span<const SymmetricDist> children) {
  if (children.empty()) throw Error(ErrorKind::EmptyChildren, "recursion needs at least one child");
  std::vector<double> prod(static_cast<std::size_t>(spec.q()), 1.0);
  for (const auto& child : children) {
    if (child.q() != spec.q()) throw Error(ErrorKind::DimensionMismatch, "child differs in q");
    const auto h = spec.apply(child.probabilities());
    for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= h[i];
  }
  return SymmetricDist::from_probabilities(detail::normalize_or_throw(std::move(prod)));
}

/// One level of the homogeneous Cayley(k) recursion p -> normalize((M p)^k).
inline std::vector<double> homogeneous_step(const TransferSpec& spec, std::span<const double> p, int children) {
  auto h = spec.apply(p);
  for (double& x : h) x = std::pow(x, children);
  return detail::normalize_or_throw(std::move(h));
}

// ---------------------------------------------------------------------------
// Closed mode maps on the binary tree

/// q = 4 recursion in the orthonormal basis phi_1 = (1,0,-1,0)/sqrt2, phi_2 = (1,-1,1,-1)/2.
inline ModePair mode_map_F4(double lambda1, double lambda2, const ModePair& a) {
  const double den = 0.25 + a.alpha1 * a.alpha1 * lambda1 * lambda1 + a.alpha2 * a.alpha2 * lambda2 * lambda2;
  return {(0.5 * lambda1 * a.alpha1 + a.alpha1 * a.alpha2 * lambda1 * lambda2) / den,
          (0.5 * lambda2 * a.alpha2 + 0.5 * a.alpha1 * a.alpha1 * lambda1 * lambda1) / den};
}

/// v = 1/(2c) with c^2 = 5/2 the squared norm of the q = 5 cosine vectors.
inline const double kQ5V = 1.0 / std::sqrt(10.0);

inline ModePair mode_map_F5(double lambda1, double lambda2, const ModePair& a) {
  const double v = kQ5V;
  const double den = 0.2 + a.alpha1 * a.alpha1 * lambda1 * lambda1 + a.alpha2 * a.alpha2 * lambda2 * lambda2;
  const double cross = 2.0 * lambda1 * lambda2 * v * a.alpha1 * a.alpha2;
  return {(0.4 * lambda1 * a.alpha1 + cross + v * lambda2 * lambda2 * a.alpha2 * a.alpha2) / den,
          (0.4 * lambda2 * a.alpha2 + cross + v * lambda1 * lambda1 * a.alpha1 * a.alpha1) / den};
}

inline ModePair mode_map(int q, double lambda1, double lambda2, const ModePair& a) {
  if (q == 4) return mode_map_F4(lambda1, lambda2, a);
  if (q == 5) return mode_map_F5(lambda1, lambda2, a);
  throw Error(ErrorKind::UnsupportedQ, "closed mode maps exist for q = 4, 5 only");
}

/// Sup-norm fixed-point residual of the mode map.
inline double fixed_point_residual(int q, double lambda1, double lambda2, const ModePair& a) {
  return sup_distance(mode_map(q, lambda1, lambda2, a), a);
}

// ---------------------------------------------------------------------------
// Probes

enum class Verdict { ConvergesToUniform, BoundedAway, Undecided };

constexpr std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::ConvergesToUniform: return "CONVERGES_TO_UNIFORM";
    case Verdict::BoundedAway: return "BOUNDED_AWAY";
    case Verdict::Undecided: return "UNDECIDED";
  }
  return "UNDECIDED";
}

inline constexpr double kDefaultProbeTol = 1e-12;
inline constexpr int kDefaultProbeLevels = 400;

struct ProbeResult {
  std::vector<double> distances;  // sup-norm distance to uniform after each level
  Verdict verdict = Verdict::Undecided;
  int levels_used = 0;
  double u = 1.0;
  int children = 2;
  /// Leaf layer: each leaf above the all-0 boundary carries `children`
  /// weakened edges, so its marginal is proportional to (M^u(., 0))^children.
  std::string boundary_init = "leaf ~ (M^u(.,0))^k";
  std::vector<double> final_marginal;
};

/// Verdict rule: final distance < tol converges; the last quarter of the
/// levels all above 10 tol is bounded away; anything else is undecided.
inline Verdict judge(std::span<const double> distances, double tol) {
  if (distances.empty()) return Verdict::Undecided;
  if (distances.back() < tol) return Verdict::ConvergesToUniform;
  const std::size_t tail = std::max<std::size_t>(1, (distances.size() + 3) / 4);
  const bool plateau = std::all_of(distances.end() - static_cast<std::ptrdiff_t>(tail), distances.end(),
                                   [tol](double d) { return d > 10.0 * tol; });
  return plateau ? Verdict::BoundedAway : Verdict::Undecided;
}

/// Root marginal under the all-0 boundary condition with boundary edges
/// weakened to u Phi, on Cayley(k) with level cutsets. All vertices of a level
/// share one marginal, so a single vector is iterated.
inline ProbeResult rpt_probe(const TransferSpec& spec, const TreeFamily& tree, double u,
                             int levels = kDefaultProbeLevels, double tol = kDefaultProbeTol) {
  const int k = cayley_children(tree);
  if (levels < 1) throw Error(ErrorKind::InvalidArgument, "levels must be positive");
  if (!(tol > 0.0)) throw Error(ErrorKind::InvalidArgument, "tol must be positive");
  const TransferSpec weak = weakened_row(spec, u);

  // column 0 of M^u equals its first row by symmetry
  std::vector<double> p = weak.row();
  for (double& x : p) x = std::pow(x, k);
  p = detail::normalize_or_throw(std::move(p));

  ProbeResult result;
  result.u = u;
  result.children = k;
  result.distances.reserve(static_cast<std::size_t>(levels));
  for (int level = 0; level < levels; ++level) {
    p = homogeneous_step(spec, p, k);
    result.distances.push_back(detail::uniform_distance(p));
  }
  result.levels_used = levels;
  result.verdict = judge(result.distances, tol);
  result.final_marginal = std::move(p);
  return result;
}

/// Full-coupling probe (u = 1).
inline ProbeResult pt_probe(const TransferSpec& spec, const TreeFamily& tree, int levels = kDefaultProbeLevels,
                            double tol = kDefaultProbeTol) {
  return rpt_probe(spec, tree, 1.0, levels, tol);
}

// ---------------------------------------------------------------------------

/// || normalize(prod h_i) - 1 - sum (h_i - 1) ||_A with h_i = M child_i,
/// the error of the linearized convolution step.
inline double linearization_residual(const TransferSpec& spec, std::span<const SymmetricDist> children) {
  if (children.empty()) throw Error(ErrorKind::EmptyChildren, "need at least one child");
  const int q = spec.q();
  const double uniform = 1.0 / q;
  std::vector<double> prod(static_cast<std::size_t>(q), 1.0);
  std::vector<double> linear(static_cast<std::size_t>(q), 0.0);
  for (const auto& child : children) {
    if (child.q() != q) throw Error(ErrorKind::DimensionMismatch, "child differs in q");
    const auto h = spec.apply(child.probabilities());
    std::vector<double> dh(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) dh[i] = h[i] - uniform;
    if (a_norm(q, dh) > 1.0) {
      throw Error(ErrorKind::InvalidArgument, "linearization requires ||h - 1||_A <= 1");
    }
    for (std::size_t i = 0; i < h.size(); ++i) {
      prod[i] *= h[i];
      linear[i] += dh[i];
    }
  }
  prod = detail::normalize_or_throw(std::move(prod));
  std::vector<double> residual(static_cast<std::size_t>(q));
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] = (prod[i] - uniform) - linear[i];
  return a_norm(q, residual);
}

}  // namespace clockpt
