#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace clockpt {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  SpectrumAsymmetric,
  NotStochastic,
  RowAsymmetric,
  NotAProbability,
  AsymmetricVector,
  ZeroRowEntry,
  EmptyChildren,
  NormalizationUnderflow,
  DegenerateQuartic,
  AtSpecialPoint,
  P3Vanishes,
  RadicandNegative,
  UnsupportedQ,
  UnsupportedTree,
  ContinuationLost,
  SingularJacobian,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::SpectrumAsymmetric: return "SpectrumAsymmetric";
    case ErrorKind::NotStochastic: return "NotStochastic";
    case ErrorKind::RowAsymmetric: return "RowAsymmetric";
    case ErrorKind::NotAProbability: return "NotAProbability";
    case ErrorKind::AsymmetricVector: return "AsymmetricVector";
    case ErrorKind::ZeroRowEntry: return "ZeroRowEntry";
    case ErrorKind::EmptyChildren: return "EmptyChildren";
    case ErrorKind::NormalizationUnderflow: return "NormalizationUnderflow";
    case ErrorKind::DegenerateQuartic: return "DegenerateQuartic";
    case ErrorKind::AtSpecialPoint: return "AtSpecialPoint";
    case ErrorKind::P3Vanishes: return "P3Vanishes";
    case ErrorKind::RadicandNegative: return "RadicandNegative";
    case ErrorKind::UnsupportedQ: return "UnsupportedQ";
    case ErrorKind::UnsupportedTree: return "UnsupportedTree";
    case ErrorKind::ContinuationLost: return "ContinuationLost";
    case ErrorKind::SingularJacobian: return "SingularJacobian";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace clockpt
