#pragma once

// Circulant transfer matrices of reflection-symmetric q-state clock models,
// the symmetric cosine basis and the conversions between eigenvalues, first
// rows, probability vectors and Fourier modes.
//
// Two bases are used for symmetric vectors on {0..q-1}:
//   RAW         cos_j(k) = cos(2 pi j k / q),            j = 0..floor(q/2)
//   NORMALIZED  phi_j(k) = cos_j(k) / sqrt(z_j),         z_j = sum_k cos_j(k)^2
// A symmetric probability vector is stored through its NORMALIZED modes
// alpha_1..alpha_floor(q/2); the constant part 1/q is implicit.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "clockpt/error.hpp"
#include "clockpt/numeric.hpp"

namespace clockpt {

inline constexpr int kMinStates = 3;
inline constexpr int kMaxStates = 64;
inline constexpr double kSpectralTol = 1e-12;

namespace detail {

inline void check_state_count(int q) {
  if (q < kMinStates || q > kMaxStates) {
    throw Error(ErrorKind::InvalidArgument,
                "number of states must lie in [3, 64], got " + std::to_string(q));
  }
}

inline int half(int q) { return q / 2; }

}  // namespace detail

/// z_j = sum_k cos^2(2 pi j k / q): q for j = 0 or 2j = q, q/2 otherwise.
inline double basis_norm_squared(int q, int j) {
  if (j % q == 0 || 2 * (j % q) == q) return static_cast<double>(q);
  return 0.5 * static_cast<double>(q);
}

enum class Basis { Raw, Normalized };

/// Scale factors of one of the two cosine bases for modes 0..floor(q/2).
/// RAW stores z_j, NORMALIZED stores c_j = sqrt(z_j).
struct BasisConvention {
  Basis tag = Basis::Normalized;
  int q = 0;
  std::vector<double> scale;

  static BasisConvention make(int q, Basis tag) {
    detail::check_state_count(q);
    BasisConvention conv{tag, q, {}};
    for (int j = 0; j <= detail::half(q); ++j) {
      const double z = basis_norm_squared(q, j);
      conv.scale.push_back(tag == Basis::Raw ? z : std::sqrt(z));
    }
    return conv;
  }

  /// Value of basis vector j at site k.
  double basis(int j, int k) const {
    const double c = numeric::cos_table(q, j, k);
    return tag == Basis::Raw ? c : c / scale[static_cast<std::size_t>(j)];
  }
};

/// Coefficients a_j = <f, cos_j> / z_j, j = 0..floor(q/2).
inline std::vector<double> raw_coefficients(int q, std::span<const double> f) {
  if (static_cast<int>(f.size()) != q) {
    throw Error(ErrorKind::DimensionMismatch, "vector length differs from q");
  }
  std::vector<double> a(static_cast<std::size_t>(detail::half(q) + 1));
  for (int j = 0; j <= detail::half(q); ++j) {
    numeric::CompensatedSum s;
    for (int k = 0; k < q; ++k) s += f[static_cast<std::size_t>(k)] * numeric::cos_table(q, j, k);
    a[static_cast<std::size_t>(j)] = s.value() / basis_norm_squared(q, j);
  }
  return a;
}

/// Exact rescaling RAW -> NORMALIZED: alpha_j = sqrt(z_j) a_j.
inline std::vector<double> normalized_from_raw(int q, std::span<const double> raw) {
  std::vector<double> out(raw.begin(), raw.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] *= std::sqrt(basis_norm_squared(q, static_cast<int>(j)));
  return out;
}

inline std::vector<double> raw_from_normalized(int q, std::span<const double> normalized) {
  std::vector<double> out(normalized.begin(), normalized.end());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] /= std::sqrt(basis_norm_squared(q, static_cast<int>(j)));
  return out;
}

inline bool is_reflection_symmetric(std::span<const double> f, double tol = kSpectralTol) {
  const auto q = f.size();
  for (std::size_t j = 1; j < q; ++j) {
    if (std::abs(f[j] - f[q - j]) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Eigenvalue <-> row conversions

/// r_l = (1/q) sum_k lambda_k exp(2 pi i l k / q), computed by direct summation.
inline std::vector<double> row_from_eigenvalues(int q, std::span<const double> lambda) {
  detail::check_state_count(q);
  if (static_cast<int>(lambda.size()) != q) {
    throw Error(ErrorKind::DimensionMismatch, "expected q eigenvalues");
  }
  if (!is_reflection_symmetric(lambda)) {
    throw Error(ErrorKind::SpectrumAsymmetric, "lambda_j must equal lambda_{q-j}");
  }
  if (std::abs(lambda[0] - 1.0) > kSpectralTol) {
    throw Error(ErrorKind::NotStochastic, "lambda_0 must equal 1");
  }
  std::vector<double> row(static_cast<std::size_t>(q));
  for (int l = 0; l < q; ++l) {
    numeric::CompensatedSum re;
    numeric::CompensatedSum im;
    for (int k = 0; k < q; ++k) {
      const double lk = (k == 0) ? 1.0 : lambda[static_cast<std::size_t>(k)];
      re += lk * numeric::cos_table(q, l, k);
      im += lk * numeric::sin_table(q, l, k);
    }
    if (std::abs(im.value()) / q >= kSpectralTol) {
      throw Error(ErrorKind::SpectrumAsymmetric, "row has a non-vanishing imaginary part");
    }
    double r = re.value() / q;
    if (r < -kSpectralTol) {
      throw Error(ErrorKind::NotStochastic,
                  "row entry r_" + std::to_string(l) + " = " + std::to_string(r) + " is negative");
    }
    row[static_cast<std::size_t>(l)] = std::max(r, 0.0);
  }
  return row;
}

/// lambda_j = sum_k r_k exp(-2 pi i j k / q); real for symmetric rows.
inline std::vector<double> eigenvalues_from_row(std::span<const double> row) {
  const int q = static_cast<int>(row.size());
  detail::check_state_count(q);
  if (!is_reflection_symmetric(row)) {
    throw Error(ErrorKind::RowAsymmetric, "r_k must equal r_{q-k}");
  }
  numeric::CompensatedSum total;
  for (double r : row) {
    if (r < -kSpectralTol) throw Error(ErrorKind::NotAProbability, "row has a negative entry");
    total += r;
  }
  if (std::abs(total.value() - 1.0) > kSpectralTol) {
    throw Error(ErrorKind::NotAProbability, "row does not sum to 1");
  }
  std::vector<double> lambda(static_cast<std::size_t>(q));
  for (int j = 0; j < q; ++j) {
    numeric::CompensatedSum s;
    for (int k = 0; k < q; ++k) s += row[static_cast<std::size_t>(k)] * numeric::cos_table(q, j, k);
    lambda[static_cast<std::size_t>(j)] = s.value();
  }
  lambda[0] = 1.0;
  return lambda;
}

/// Full symmetric spectrum (1, l_1, .., l_h, .., l_1) from the independent
/// eigenvalues l_1..l_floor(q/2).
inline std::vector<double> spectrum_from_modes(int q, std::span<const double> independent) {
  detail::check_state_count(q);
  if (static_cast<int>(independent.size()) != detail::half(q)) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected floor(q/2) = " + std::to_string(detail::half(q)) + " eigenvalues");
  }
  std::vector<double> lambda(static_cast<std::size_t>(q));
  lambda[0] = 1.0;
  for (int j = 1; j <= detail::half(q); ++j) {
    lambda[static_cast<std::size_t>(j)] = independent[static_cast<std::size_t>(j - 1)];
    lambda[static_cast<std::size_t>(q - j)] = independent[static_cast<std::size_t>(j - 1)];
  }
  return lambda;
}

// ---------------------------------------------------------------------------

/// Stochastic, reflection-symmetric circulant transfer matrix. Immutable.
class TransferSpec {
 public:
  static TransferSpec from_eigenvalues(int q, std::span<const double> lambda) {
    auto row = row_from_eigenvalues(q, lambda);
    std::vector<double> eig(lambda.begin(), lambda.end());
    eig[0] = 1.0;
    return TransferSpec(q, std::move(eig), std::move(row));
  }

  /// Convenience: (lambda_1, .., lambda_floor(q/2)).
  static TransferSpec from_modes(int q, std::span<const double> independent) {
    const auto full = spectrum_from_modes(q, independent);
    return from_eigenvalues(q, full);
  }

  static TransferSpec from_modes(int q, std::initializer_list<double> independent) {
    const std::vector<double> v(independent);
    return from_modes(q, std::span<const double>(v));
  }

  static TransferSpec from_row(std::span<const double> row) {
    auto eig = eigenvalues_from_row(row);
    std::vector<double> r(row.begin(), row.end());
    for (double& x : r) x = std::max(x, 0.0);
    const int q = static_cast<int>(r.size());
    return TransferSpec(q, std::move(eig), std::move(r));
  }

  /// Potts row (theta, 1, .., 1) / (theta + q - 1) with all non-trivial
  /// eigenvalues set to (theta - 1) / (theta + q - 1) exactly.
  static TransferSpec potts(int q, double theta) {
    detail::check_state_count(q);
    if (!std::isfinite(theta) || theta <= 0.0) {
      throw Error(ErrorKind::InvalidArgument, "theta = e^beta must be finite and positive");
    }
    const double z = theta + q - 1.0;
    std::vector<double> row(static_cast<std::size_t>(q), 1.0 / z);
    row[0] = theta / z;
    std::vector<double> eig(static_cast<std::size_t>(q), (theta - 1.0) / z);
    eig[0] = 1.0;
    return TransferSpec(q, std::move(eig), std::move(row));
  }

  int q() const { return q_; }
  const std::vector<double>& eigenvalues() const { return eigenvalues_; }
  const std::vector<double>& row() const { return row_; }
  double eigenvalue(int j) const { return eigenvalues_[static_cast<std::size_t>(((j % q_) + q_) % q_)]; }

  /// M(i, j) = r_{(j - i) mod q}.
  double entry(int i, int j) const {
    return row_[static_cast<std::size_t>((((j - i) % q_) + q_) % q_)];
  }

  /// Pointwise (M p)(i) = sum_j M(i, j) p(j).
  std::vector<double> apply(std::span<const double> p) const {
    if (static_cast<int>(p.size()) != q_) {
      throw Error(ErrorKind::DimensionMismatch, "vector length differs from q");
    }
    std::vector<double> out(static_cast<std::size_t>(q_));
    for (int i = 0; i < q_; ++i) {
      numeric::CompensatedSum s;
      for (int j = 0; j < q_; ++j) s += entry(i, j) * p[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(i)] = s.value();
    }
    return out;
  }

 private:
  TransferSpec(int q, std::vector<double> eig, std::vector<double> row)
      : q_(q), eigenvalues_(std::move(eig)), row_(std::move(row)) {}

  int q_;
  std::vector<double> eigenvalues_;
  std::vector<double> row_;
};

// ---------------------------------------------------------------------------

/// Reflection-symmetric probability vector stored as NORMALIZED modes.
class SymmetricDist {
 public:
  static SymmetricDist uniform(int q) {
    detail::check_state_count(q);
    return SymmetricDist(q, std::vector<double>(static_cast<std::size_t>(detail::half(q)), 0.0));
  }

  static SymmetricDist from_modes(int q, std::vector<double> modes) {
    detail::check_state_count(q);
    if (static_cast<int>(modes.size()) != detail::half(q)) {
      throw Error(ErrorKind::DimensionMismatch, "expected floor(q/2) modes");
    }
    SymmetricDist d(q, std::move(modes));
    d.validate();
    return d;
  }

  static SymmetricDist from_probabilities(std::span<const double> p) {
    const int q = static_cast<int>(p.size());
    detail::check_state_count(q);
    if (!is_reflection_symmetric(p)) {
      throw Error(ErrorKind::AsymmetricVector, "p(j) must equal p(q-j)");
    }
    const auto raw = clockpt::raw_coefficients(q, p);
    std::vector<double> modes(static_cast<std::size_t>(detail::half(q)));
    for (int j = 1; j <= detail::half(q); ++j) {
      modes[static_cast<std::size_t>(j - 1)] =
          raw[static_cast<std::size_t>(j)] * std::sqrt(basis_norm_squared(q, j));
    }
    SymmetricDist d(q, std::move(modes));
    d.validate();
    return d;
  }

  int q() const { return q_; }
  const std::vector<double>& modes() const { return modes_; }
  double mode(int k) const { return modes_[static_cast<std::size_t>(k - 1)]; }

  /// p(j) = 1/q + sum_k alpha_k phi_k(j).
  std::vector<double> probabilities() const { return reconstruct(q_, modes_); }

  /// RAW coefficients a_0 = 1/q, a_k = alpha_k / sqrt(z_k).
  std::vector<double> raw_coefficients() const {
    std::vector<double> a{1.0 / q_};
    for (int k = 1; k <= detail::half(q_); ++k) a.push_back(mode(k) / std::sqrt(basis_norm_squared(q_, k)));
    return a;
  }

  static std::vector<double> reconstruct(int q, std::span<const double> modes) {
    std::vector<double> p(static_cast<std::size_t>(q));
    for (int j = 0; j <= q / 2; ++j) {
      numeric::CompensatedSum s;
      s += 1.0 / q;
      for (int k = 1; k <= static_cast<int>(modes.size()); ++k) {
        s += modes[static_cast<std::size_t>(k - 1)] * numeric::cos_table(q, k, j) /
             std::sqrt(basis_norm_squared(q, k));
      }
      p[static_cast<std::size_t>(j)] = s.value();
    }
    for (int j = 1; j < q - j; ++j) p[static_cast<std::size_t>(q - j)] = p[static_cast<std::size_t>(j)];
    return p;
  }

  /// True if the modes reconstruct to a probability vector within tol.
  static bool is_probability(int q, std::span<const double> modes, double tol = kSpectralTol) {
    const auto p = reconstruct(q, modes);
    return std::all_of(p.begin(), p.end(), [tol](double x) { return x >= -tol; });
  }

 private:
  SymmetricDist(int q, std::vector<double> modes) : q_(q), modes_(std::move(modes)) {}

  void validate() const {
    const auto p = probabilities();
    numeric::CompensatedSum total;
    for (double x : p) {
      if (!std::isfinite(x) || x < -kSpectralTol) {
        throw Error(ErrorKind::NotAProbability, "modes reconstruct to a negative probability");
      }
      total += x;
    }
    if (std::abs(total.value() - 1.0) > kSpectralTol) {
      throw Error(ErrorKind::NotAProbability, "probabilities do not sum to 1");
    }
  }

  int q_;
  std::vector<double> modes_;
};

// ---------------------------------------------------------------------------
// Model families

/// Potts model parametrized by theta = e^beta: row proportional to (theta, 1, .., 1).
inline TransferSpec make_potts_theta(int q, double theta) { return TransferSpec::potts(q, theta); }

inline TransferSpec make_potts(int q, double beta) {
  if (!std::isfinite(beta)) throw Error(ErrorKind::InvalidArgument, "beta must be finite");
  return make_potts_theta(q, std::exp(beta));
}

/// theta = e^beta of the Potts model whose non-trivial eigenvalue is lambda.
inline double potts_theta_from_lambda(int q, double lambda) {
  if (!(lambda < 1.0)) throw Error(ErrorKind::InvalidArgument, "lambda must be < 1");
  return (1.0 + lambda * (q - 1)) / (1.0 - lambda);
}

/// Standard clock model: r_j proportional to exp(J cos(2 pi j / q)).
inline TransferSpec make_standard_clock(int q, double coupling) {
  detail::check_state_count(q);
  if (!std::isfinite(coupling)) throw Error(ErrorKind::InvalidArgument, "J must be finite");
  std::vector<double> row(static_cast<std::size_t>(q));
  numeric::CompensatedSum z;
  for (int j = 0; j < q; ++j) {
    // shifted by the maximum exponent so that large J does not overflow
    const double shift = coupling >= 0.0 ? 1.0 : -1.0;
    row[static_cast<std::size_t>(j)] = std::exp(coupling * (numeric::cos_table(q, 1, j) - shift));
    z += row[static_cast<std::size_t>(j)];
  }
  for (double& r : row) r /= z.value();
  // enforce exact reflection symmetry of the rounded row
  for (int j = 1; j < q - j; ++j) row[static_cast<std::size_t>(q - j)] = row[static_cast<std::size_t>(j)];
  return TransferSpec::from_row(row);
}

// ---------------------------------------------------------------------------

struct FeasibilityReport {
  bool feasible = true;
  std::string violated;  // empty when feasible
};

/// Non-increasing check on a (possibly infeasible) row:
/// r_0 >= r_1 >= .. >= r_floor(q/2) >= 0 with slack, and lambda_1 >= lambda_2 for q = 4, 5.
inline FeasibilityReport check_non_increasing(std::span<const double> row, std::span<const double> eigenvalues) {
  const int q = static_cast<int>(row.size());
  for (int j = 0; j < detail::half(q); ++j) {
    if (row[static_cast<std::size_t>(j)] < row[static_cast<std::size_t>(j + 1)] - kSpectralTol) {
      return {false, "r" + std::to_string(j) + " >= r" + std::to_string(j + 1)};
    }
  }
  if (row[static_cast<std::size_t>(detail::half(q))] < -kSpectralTol) {
    return {false, "r" + std::to_string(detail::half(q)) + " >= 0"};
  }
  if ((q == 4 || q == 5) && eigenvalues[1] < eigenvalues[2] - kSpectralTol) {
    return {false, "lambda1 >= lambda2"};
  }
  return {};
}

inline FeasibilityReport validate_non_increasing(const TransferSpec& spec) {
  return check_non_increasing(spec.row(), spec.eigenvalues());
}

/// Feasibility of (lambda_1, .., lambda_floor(q/2)) without constructing a
/// TransferSpec, so that spectra with negative rows are reported, not thrown.
inline FeasibilityReport feasibility_from_modes(int q, std::span<const double> independent) {
  const auto lambda = spectrum_from_modes(q, independent);
  std::vector<double> row(static_cast<std::size_t>(q));
  for (int l = 0; l < q; ++l) {
    numeric::CompensatedSum s;
    for (int k = 0; k < q; ++k) s += lambda[static_cast<std::size_t>(k)] * numeric::cos_table(q, l, k);
    row[static_cast<std::size_t>(l)] = s.value() / q;
  }
  return check_non_increasing(row, lambda);
}

// ---------------------------------------------------------------------------

/// Mode-space action of M: alpha_k -> lambda_k alpha_k.
inline SymmetricDist apply_transfer(const TransferSpec& spec, const SymmetricDist& d) {
  if (spec.q() != d.q()) throw Error(ErrorKind::DimensionMismatch, "spec and distribution differ in q");
  std::vector<double> modes = d.modes();
  for (int k = 1; k <= static_cast<int>(modes.size()); ++k) modes[static_cast<std::size_t>(k - 1)] *= spec.eigenvalue(k);
  return SymmetricDist::from_modes(spec.q(), std::move(modes));
}

/// Transfer matrix of the potential u * Phi with Phi = -log M: row proportional to r_j^u.
inline TransferSpec weakened_row(const TransferSpec& spec, double u) {
  if (!(u > 0.0 && u <= 1.0)) throw Error(ErrorKind::InvalidArgument, "u must lie in (0, 1]");
  const auto& row = spec.row();
  if (std::any_of(row.begin(), row.end(), [](double r) { return r <= 0.0; })) {
    throw Error(ErrorKind::ZeroRowEntry, "potential is infinite where r_j = 0");
  }
  if (u == 1.0) return spec;
  std::vector<double> weak(row.size());
  numeric::CompensatedSum z;
  for (std::size_t j = 0; j < row.size(); ++j) {
    weak[j] = std::exp(u * std::log(row[j]));
    z += weak[j];
  }
  for (double& w : weak) w /= z.value();
  return TransferSpec::from_row(weak);
}

/// Sum of absolute basis coefficients (j = 0 included). RAW gives the usual
/// A-norm sum |a_j|; NORMALIZED sums |<f, phi_j>| with phi_0 = 1/sqrt(q).
inline double a_norm(int q, std::span<const double> f, Basis convention = Basis::Raw) {
  detail::check_state_count(q);
  if (static_cast<int>(f.size()) != q) throw Error(ErrorKind::DimensionMismatch, "vector length differs from q");
  if (!is_reflection_symmetric(f)) throw Error(ErrorKind::AsymmetricVector, "f(j) must equal f(q-j)");
  auto coeffs = raw_coefficients(q, f);
  if (convention == Basis::Normalized) coeffs = normalized_from_raw(q, coeffs);
  numeric::CompensatedSum s;
  for (double a : coeffs) s += std::abs(a);
  return s.value();
}

}  // namespace clockpt
