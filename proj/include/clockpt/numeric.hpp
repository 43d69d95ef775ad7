#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <span>

namespace clockpt::numeric {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Neumaier-compensated sum.
class CompensatedSum {
 public:
  CompensatedSum& operator+=(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
    return *this;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double compensated_sum(std::span<const double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

inline double compensated_sum(std::initializer_list<double> xs) {
  CompensatedSum s;
  for (double x : xs) s += x;
  return s.value();
}

/// cos(2*pi*j*k/q) with the argument reduced modulo q first, so that
/// exact zeros of the cosine table (e.g. q=4) stay tiny.
inline double cos_table(int q, long j, long k) {
  long m = (j * k) % q;
  if (m < 0) m += q;
  if (2 * m == q) return -1.0;
  if (m == 0) return 1.0;
  if (4 * m == q || 4 * m == 3 * q) return 0.0;
  return std::cos(kTwoPi * static_cast<double>(m) / static_cast<double>(q));
}

inline double sin_table(int q, long j, long k) {
  long m = (j * k) % q;
  if (m < 0) m += q;
  if (m == 0 || 2 * m == q) return 0.0;
  return std::sin(kTwoPi * static_cast<double>(m) / static_cast<double>(q));
}

inline double max_abs(std::span<const double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace clockpt::numeric
