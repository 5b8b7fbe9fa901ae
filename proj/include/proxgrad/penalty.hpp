#pragma once

#include <limits>
#include <string_view>

namespace proxgrad {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class PenaltyKind { L0, LpPower, LogPenalty, IntegerIndicator };

std::string_view to_string(PenaltyKind kind);
/// Accepts "l0", "lp", "log", "integer" (case sensitive).
PenaltyKind parse_penalty_kind(std::string_view name);

/// Nonsmooth integrand of the control cost
///
///   (alpha/2) u^2 + beta * g(u),   g(u) = base(u) + indicator_{[-b, b]}(u)
///
/// where base(u) is |u|_0, |u|^p, ln(1 + a|u|) or the indicator of the
/// integers. The scalar routines only ever see g; alpha and beta enter
/// through the prox scaling s = beta / (L + alpha).
struct PenaltySpec {
  PenaltyKind kind = PenaltyKind::LpPower;
  double p = 0.5;          // LpPower exponent, 0 < p < 1
  double log_slope = 1.0;  // LogPenalty slope a > 0
  double box_bound = kInf;
  double alpha = 0.0;
  double beta = 1.0;

  /// Throws ParameterError when a field is out of range.
  void validate() const;

  /// g(u); +inf outside the box or off the integers for IntegerIndicator.
  [[nodiscard]] double eval(double u) const;

  [[nodiscard]] bool boxed() const { return box_bound < kInf; }
};

}  // namespace proxgrad
