#include "proxgrad/penalty.hpp"

#include <cmath>
#include <string>

#include "proxgrad/errors.hpp"

namespace proxgrad {

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::L0: return "l0";
    case PenaltyKind::LpPower: return "lp";
    case PenaltyKind::LogPenalty: return "log";
    case PenaltyKind::IntegerIndicator: return "integer";
  }
  return "?";
}

PenaltyKind parse_penalty_kind(std::string_view name) {
  if (name == "l0") return PenaltyKind::L0;
  if (name == "lp") return PenaltyKind::LpPower;
  if (name == "log") return PenaltyKind::LogPenalty;
  if (name == "integer") return PenaltyKind::IntegerIndicator;
  throw ParameterError("unknown penalty kind '" + std::string(name) + "'");
}

void PenaltySpec::validate() const {
  if (kind == PenaltyKind::LpPower && !(p > 0.0 && p < 1.0))
    throw ParameterError("LpPower penalty requires 0 < p < 1");
  if (kind == PenaltyKind::LogPenalty && !(log_slope > 0.0 && std::isfinite(log_slope)))
    throw ParameterError("LogPenalty requires a finite slope a > 0");
  if (!(box_bound > 0.0)) throw ParameterError("box bound b must be positive");
  if (!(alpha >= 0.0 && std::isfinite(alpha))) throw ParameterError("alpha must be finite and >= 0");
  if (!(beta >= 0.0 && std::isfinite(beta))) throw ParameterError("beta must be finite and >= 0");
}

double PenaltySpec::eval(double u) const {
  const double a = std::abs(u);
  if (a > box_bound) return kInf;
  switch (kind) {
    case PenaltyKind::L0: return a != 0.0 ? 1.0 : 0.0;
    case PenaltyKind::LpPower: return a != 0.0 ? std::pow(a, p) : 0.0;
    case PenaltyKind::LogPenalty: return std::log1p(log_slope * a);
    case PenaltyKind::IntegerIndicator: return u == std::nearbyint(u) ? 0.0 : kInf;
  }
  return kInf;
}

}  // namespace proxgrad
