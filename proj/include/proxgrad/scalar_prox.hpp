#pragma once

#include "proxgrad/penalty.hpp"

namespace proxgrad {

enum class ProxBranch { Zero, Interior, AtBound };

std::string_view to_string(ProxBranch branch);

/// Global minimizer of h_{q,s}(u) = -q u + u^2/2 + s g(u).
struct ProxResult {
  double value = 0.0;
  double objective = 0.0;  // h_{q,s}(value); never above h_{q,s}(0) = 0
  bool tie = false;        // zero and a nonzero point are both global minimizers
  ProxBranch branch = ProxBranch::Zero;
};

/// Constants describing the sparsity structure of prox_{s g}.
///
/// Every nonzero prox output satisfies |u| >= u0, and the prox vanishes
/// exactly when |q| <= q0. uI is the inflection point of u^2/2 + s u^p
/// (LpPower only, 0 otherwise); the nonzero branch is single valued past it.
struct SparsityConstants {
  double u0 = 0.0;
  double q0 = 0.0;
  double uI = 0.0;
};

/// Objective values closer than this (relative to the magnitude of the
/// terms of h) are treated as equal. Ties resolve to the smaller magnitude.
inline constexpr double kTieRelTol = 1e-14;
/// Absolute tolerance on the nonzero LpPower root.
inline constexpr double kRootTol = 1e-12;

/// h_{q,s}(u); +inf if u is infeasible for the penalty.
[[nodiscard]] double prox_objective(double q, double s, const PenaltySpec& pen, double u);

/// Dispatches on pen.kind. s >= 0; s == 0 reduces to the projection onto
/// the feasible set.
[[nodiscard]] ProxResult prox_scalar(double q, double s, const PenaltySpec& pen);

/// Hard thresholding: 0 for |q| <= sqrt(2s), q (clipped to the box) above.
[[nodiscard]] ProxResult prox_l0(double q, double s, double b = kInf);
/// |u|^p penalty. Nonzero branch solved by safeguarded Newton on
/// u - |q| + s p u^{p-1} = 0 over [uI, |q|].
[[nodiscard]] ProxResult prox_lp(double q, double s, double p, double b = kInf);
/// ln(1 + a|u|) penalty; candidates are roots of a u^2 + (1 - a q) u + (s a - q).
[[nodiscard]] ProxResult prox_log(double q, double s, double a, double b = kInf);
/// Nearest integer inside the box; half integers go to the smaller magnitude.
[[nodiscard]] ProxResult prox_integer(double q, double s, double b = kInf);

[[nodiscard]] double compute_u0(double s, const PenaltySpec& pen);
[[nodiscard]] double compute_q0(double s, const PenaltySpec& pen);
[[nodiscard]] double compute_uI(double s, double p);
[[nodiscard]] SparsityConstants sparsity_constants(double s, const PenaltySpec& pen);

/// Verification oracle: dense scan of h_{q,s} over the growth-bound interval
/// |u| <= min(b, 2|q| + 1), golden-section refinement of the best nonzero
/// grid point on each side, then a slope bisection polish. Integer penalties
/// are enumerated. Returns the global minimizer (smaller magnitude on ties).
[[nodiscard]] double brute_force_prox(double q, double s, const PenaltySpec& pen,
                                      int grid_n = 4001, double refine_tol = 1e-12);

/// L <= (2/p - 1) alpha: the step regime in which the nonzero branch of the
/// stationarity map stays single valued for LpPower.
[[nodiscard]] bool check_strong_conv_condition(double L, double alpha, double p);

}  // namespace proxgrad
