#pragma once

// Real quartics: discriminant and the classical sign invariants, the real-root
// structure they imply, and an independent root list from the eigenvalues of
// the companion matrix.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include "clockpt/error.hpp"
#include "clockpt/numeric.hpp"

namespace clockpt {

/// a x^4 + b x^3 + c x^2 + d x + e
struct Quartic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  double d = 0.0;
  double e = 0.0;

  double operator()(double x) const { return (((a * x + b) * x + c) * x + d) * x + e; }
  double derivative(double x) const { return ((4.0 * a * x + 3.0 * b) * x + 2.0 * c) * x + d; }

  double scale() const {
    return std::max({std::abs(a), std::abs(b), std::abs(c), std::abs(d), std::abs(e)});
  }
  bool vanishes() const { return a == 0.0 && b == 0.0 && c == 0.0 && d == 0.0 && e == 0.0; }
};

struct QuarticInvariants {
  double discriminant = 0.0;  // Delta
  double p = 0.0;             // 8ac - 3b^2
  double d = 0.0;             // 64a^3e - 16a^2c^2 + 16ab^2c - 16a^2bd - 3b^4
  double delta0 = 0.0;        // c^2 - 3bd + 12ae
  double r = 0.0;             // b^3 + 8a^2d - 4abc
};

/// Delta, P, D, Delta0 (and R) evaluated with compensated summation.
inline QuarticInvariants quartic_invariants(const Quartic& q) {
  if (q.a == 0.0) throw Error(ErrorKind::DegenerateQuartic, "leading coefficient vanishes");
  const double a = q.a, b = q.b, c = q.c, d = q.d, e = q.e;
  const double a2 = a * a, a3 = a2 * a, b2 = b * b, b3 = b2 * b, b4 = b2 * b2;
  const double c2 = c * c, c3 = c2 * c, c4 = c2 * c2, d2 = d * d, d3 = d2 * d, d4 = d2 * d2;
  const double e2 = e * e, e3 = e2 * e;
  QuarticInvariants inv;
  inv.discriminant = numeric::compensated_sum({
      256.0 * a3 * e3, -192.0 * a2 * b * d * e2, -128.0 * a2 * c2 * e2, 144.0 * a2 * c * d2 * e,
      -27.0 * a2 * d4, 144.0 * a * b2 * c * e2, -6.0 * a * b2 * d2 * e, -80.0 * a * b * c2 * d * e,
      18.0 * a * b * c * d3, 16.0 * a * c4 * e, -4.0 * a * c3 * d2, -27.0 * b4 * e2, 18.0 * b3 * c * d * e,
      -4.0 * b3 * d3, -4.0 * b2 * c3 * e, b2 * c2 * d2,
  });
  inv.p = numeric::compensated_sum({8.0 * a * c, -3.0 * b2});
  inv.d = numeric::compensated_sum(
      {64.0 * a3 * e, -16.0 * a2 * c2, 16.0 * a * b2 * c, -16.0 * a2 * b * d, -3.0 * b4});
  inv.delta0 = numeric::compensated_sum({c2, -3.0 * b * d, 12.0 * a * e});
  inv.r = numeric::compensated_sum({b3, 8.0 * a2 * d, -4.0 * a * b * c});
  return inv;
}

enum class RootStructure {
  NoReal,          // four non-real roots
  TwoDistinct,     // two simple real roots, one complex pair
  FourDistinct,    // four simple real roots
  DoubleRootPlus,  // one real double root plus `simple_real` (0 or 2) simple real roots
  MultipleRoots,   // triple, two double or quadruple roots
  DegenerateZero,  // identically zero polynomial
};

constexpr std::string_view to_string(RootStructure s) {
  switch (s) {
    case RootStructure::NoReal: return "NO_REAL";
    case RootStructure::TwoDistinct: return "TWO_DISTINCT";
    case RootStructure::FourDistinct: return "FOUR_DISTINCT";
    case RootStructure::DoubleRootPlus: return "DOUBLE_ROOT_PLUS";
    case RootStructure::MultipleRoots: return "MULTIPLE_ROOTS";
    case RootStructure::DegenerateZero: return "DEGENERATE_ZERO";
  }
  return "UNKNOWN";
}

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
};

struct QuarticAnalysis {
  Quartic coeffs;
  QuarticInvariants invariants;
  RootStructure structure = RootStructure::DegenerateZero;
  int simple_real = 0;                 // DoubleRootPlus only
  int multiple_distinct_real = 0;      // MultipleRoots only
  std::vector<RealRoot> real_roots;    // ascending, clustered
  std::vector<std::complex<double>> all_roots;

  /// Number of distinct real roots implied by the sign pattern.
  int expected_distinct_real() const {
    switch (structure) {
      case RootStructure::NoReal: return 0;
      case RootStructure::TwoDistinct: return 2;
      case RootStructure::FourDistinct: return 4;
      case RootStructure::DoubleRootPlus: return 1 + simple_real;
      case RootStructure::MultipleRoots: return multiple_distinct_real;
      case RootStructure::DegenerateZero: return 0;
    }
    return 0;
  }
};

inline constexpr double kInvariantZeroTol = 1e-12;
inline constexpr double kRootClusterTol = 1e-8;

/// All four complex roots from the eigenvalues of the companion matrix.
inline std::vector<std::complex<double>> companion_roots(const Quartic& q) {
  if (q.a == 0.0) throw Error(ErrorKind::DegenerateQuartic, "leading coefficient vanishes");
  Eigen::Matrix4d companion = Eigen::Matrix4d::Zero();
  companion(1, 0) = 1.0;
  companion(2, 1) = 1.0;
  companion(3, 2) = 1.0;
  companion(0, 3) = -q.e / q.a;
  companion(1, 3) = -q.d / q.a;
  companion(2, 3) = -q.c / q.a;
  companion(3, 3) = -q.b / q.a;
  Eigen::EigenSolver<Eigen::Matrix4d> solver(companion, false);
  std::vector<std::complex<double>> roots;
  for (int i = 0; i < 4; ++i) roots.push_back(solver.eigenvalues()(i));
  return roots;
}

namespace detail {

inline double polish_real_root(const Quartic& q, double x) {
  const double target = 1e-12 * q.scale();
  for (int it = 0; it < 50; ++it) {
    const double f = q(x);
    if (std::abs(f) <= 0.25 * target) break;
    const double df = q.derivative(x);
    if (df == 0.0) break;
    const double next = x - f / df;
    // keep the polished point only when it improves the residual
    if (std::abs(q(next)) >= std::abs(f)) break;
    x = next;
  }
  return x;
}

}  // namespace detail

/// Real roots from the companion eigenvalues: imaginary parts below
/// 1e-7 max(1, |z|) count as real, each is Newton-polished and roots closer
/// than 1e-8 are merged into one entry with multiplicity.
inline std::vector<RealRoot> real_roots_of(const Quartic& q, const std::vector<std::complex<double>>& roots) {
  std::vector<double> real;
  for (const auto& z : roots) {
    if (std::abs(z.imag()) <= 1e-7 * std::max(1.0, std::abs(z))) real.push_back(detail::polish_real_root(q, z.real()));
  }
  std::sort(real.begin(), real.end());
  std::vector<RealRoot> out;
  for (double x : real) {
    if (!out.empty() && std::abs(x - out.back().value) <= kRootClusterTol * std::max(1.0, std::abs(x))) {
      ++out.back().multiplicity;
    } else {
      out.push_back({x, 1});
    }
  }
  return out;
}

/// Root structure from the signs of Delta, P, D, Delta0 (with R for the
/// remaining Delta = D = 0 cases). Zero tests are relative:
/// |x| <= 1e-12 * scale^degree, scale = max |coefficient|.
inline QuarticAnalysis classify_quartic(const Quartic& q) {
  QuarticAnalysis out;
  out.coeffs = q;
  if (q.vanishes()) {
    out.structure = RootStructure::DegenerateZero;
    return out;
  }
  out.invariants = quartic_invariants(q);
  const auto& inv = out.invariants;
  const double s = q.scale();
  const auto zero = [s](double x, int degree) { return std::abs(x) <= kInvariantZeroTol * std::pow(s, degree); };
  const auto sign = [&](double x, int degree) { return zero(x, degree) ? 0 : (x > 0 ? 1 : -1); };

  const int disc = sign(inv.discriminant, 6);
  const int p = sign(inv.p, 2);
  const int d = sign(inv.d, 4);
  const int d0 = sign(inv.delta0, 2);
  const int r = sign(inv.r, 3);

  if (disc < 0) {
    out.structure = RootStructure::TwoDistinct;
  } else if (disc > 0) {
    out.structure = (p < 0 && d < 0) ? RootStructure::FourDistinct : RootStructure::NoReal;
  } else if (p < 0 && d < 0 && d0 != 0) {
    out.structure = RootStructure::DoubleRootPlus;
    out.simple_real = 2;
  } else if (d > 0 || (p > 0 && (d != 0 || r != 0))) {
    out.structure = RootStructure::DoubleRootPlus;
    out.simple_real = 0;
  } else {
    out.structure = RootStructure::MultipleRoots;
    if (d0 == 0 && d == 0) {
      out.multiple_distinct_real = 1;  // quadruple root
    } else if (d0 == 0) {
      out.multiple_distinct_real = 2;  // triple + simple
    } else if (p < 0) {
      out.multiple_distinct_real = 2;  // two real double roots
    } else {
      out.multiple_distinct_real = 0;  // complex double pair
    }
  }

  out.all_roots = companion_roots(q);
  out.real_roots = real_roots_of(q, out.all_roots);
  return out;
}

/// a^6 prod_{i<j} (r_i - r_j)^2 over the four complex roots.
inline double discriminant_from_roots(double leading, const std::vector<std::complex<double>>& roots) {
  std::complex<double> prod = 1.0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (std::size_t j = i + 1; j < roots.size(); ++j) prod *= (roots[i] - roots[j]) * (roots[i] - roots[j]);
  }
  return std::pow(leading, 6) * prod.real();
}

}  // namespace clockpt
