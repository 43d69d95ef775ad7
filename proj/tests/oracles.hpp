#pragma once

// Reference computations that share no code with the library: explicit
// matrices, long-double DFTs and brute-force recursions.

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<Vec>;

inline constexpr long double kPi = 3.141592653589793238462643383279502884L;

/// r_l = (1/q) sum_k lambda_k cos(2 pi l k / q), long double throughout.
inline Vec row_from_spectrum(const Vec& lambda) {
  const int q = static_cast<int>(lambda.size());
  Vec r(q);
  for (int l = 0; l < q; ++l) {
    long double s = 0;
    for (int k = 0; k < q; ++k) s += lambda[k] * std::cos(2 * kPi * l * k / q);
    r[l] = static_cast<double>(s / q);
  }
  return r;
}

/// lambda_j = sum_k r_k exp(-2 pi i j k / q); returns the real part.
inline Vec spectrum_from_row(const Vec& r) {
  const int q = static_cast<int>(r.size());
  Vec lambda(q);
  for (int j = 0; j < q; ++j) {
    long double re = 0;
    for (int k = 0; k < q; ++k) re += r[k] * std::cos(2 * kPi * j * k / q);
    lambda[j] = static_cast<double>(re);
  }
  return lambda;
}

inline Vec spectrum(int q, const Vec& independent) {
  Vec lambda(q, 0.0);
  lambda[0] = 1.0;
  for (int j = 1; j <= q / 2; ++j) {
    lambda[j] = independent[j - 1];
    lambda[q - j] = independent[j - 1];
  }
  return lambda;
}

inline Mat circulant(const Vec& row) {
  const int q = static_cast<int>(row.size());
  Mat m(q, Vec(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) m[i][j] = row[((j - i) % q + q) % q];
  return m;
}

inline Vec matvec(const Mat& m, const Vec& p) {
  Vec out(m.size(), 0.0);
  for (std::size_t i = 0; i < m.size(); ++i) {
    long double s = 0;
    for (std::size_t j = 0; j < p.size(); ++j) s += static_cast<long double>(m[i][j]) * p[j];
    out[i] = static_cast<double>(s);
  }
  return out;
}

inline Vec normalize(Vec p) {
  long double z = 0;
  for (double x : p) z += x;
  for (double& x : p) x = static_cast<double>(x / z);
  return p;
}

/// Orthonormal cosine vector phi_k(j) = cos(2 pi k j / q) / sqrt(|cos_k|^2).
inline Vec orthonormal_cosine(int q, int k) {
  Vec v(q);
  long double n = 0;
  for (int j = 0; j < q; ++j) {
    v[j] = static_cast<double>(std::cos(2 * kPi * k * j / q));
    n += static_cast<long double>(v[j]) * v[j];
  }
  for (double& x : v) x = static_cast<double>(x / std::sqrt(n));
  return v;
}

inline Vec from_modes(int q, const Vec& modes) {
  Vec p(q, 1.0 / q);
  for (int k = 1; k <= static_cast<int>(modes.size()); ++k) {
    const Vec phi = orthonormal_cosine(q, k);
    for (int j = 0; j < q; ++j) p[j] += modes[k - 1] * phi[j];
  }
  return p;
}

inline Vec to_modes(const Vec& p) {
  const int q = static_cast<int>(p.size());
  Vec modes(q / 2);
  for (int k = 1; k <= q / 2; ++k) {
    const Vec phi = orthonormal_cosine(q, k);
    long double s = 0;
    for (int j = 0; j < q; ++j) s += static_cast<long double>(p[j]) * phi[j];
    modes[k - 1] = static_cast<double>(s);
  }
  return modes;
}

/// One binary-tree step with two identical children, in modes.
inline std::pair<double, double> binary_step(int q, double l1, double l2, double a1, double a2) {
  const Mat m = circulant(row_from_spectrum(spectrum(q, {l1, l2})));
  Vec h = matvec(m, from_modes(q, {a1, a2}));
  for (double& x : h) x *= x;
  const Vec modes = to_modes(normalize(h));
  return {modes[0], modes[1]};
}

/// Raw coefficient a_j = <f, cos_j> / |cos_j|^2 by direct summation.
inline double raw_coefficient(const Vec& f, int j) {
  const int q = static_cast<int>(f.size());
  long double s = 0, n = 0;
  for (int k = 0; k < q; ++k) {
    const long double c = std::cos(2 * kPi * j * k / q);
    s += f[k] * c;
    n += c * c;
  }
  return static_cast<double>(s / n);
}

inline double a_norm(const Vec& f) {
  double s = 0;
  for (int j = 0; j <= static_cast<int>(f.size()) / 2; ++j) s += std::abs(raw_coefficient(f, j));
  return s;
}

/// Random non-increasing symmetric probability row.
inline Vec random_row(int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vec half(q / 2 + 1);
  for (double& x : half) x = u(rng);
  std::sort(half.begin(), half.end(), std::greater<>());
  Vec r(q);
  for (int j = 0; j < q; ++j) r[j] = half[std::min(j, q - j)];
  return normalize(r);
}

/// Random symmetric strictly positive probability vector.
inline Vec random_symmetric(int q, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  Vec r(q);
  for (int j = 0; j <= q / 2; ++j) r[j] = r[(q - j) % q] = u(rng);
  return normalize(r);
}

/// Least-squares slope of log y against log x.
inline double loglog_slope(const Vec& x, const Vec& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
