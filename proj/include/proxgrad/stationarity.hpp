#pragma once

#include <string_view>
#include <vector>

#include "proxgrad/pde.hpp"
#include "proxgrad/penalty.hpp"

namespace proxgrad {

struct StationarityReport {
  double pmp_residual = 0.0;           // integral of max(0, H(u) - min H)
  double pmp_violation_measure = 0.0;  // measure of cells with H(u) - min H > tol
  double l_stat_residual = 0.0;        // ||u - pg_step(u, grad f(u), L)||_{L^2}
  double L = 0.0;
};

struct PmpResult {
  double residual = 0.0;
  double violation_measure = 0.0;
};

/// Pointwise Hamiltonian check H(v) = grad f(u) v + alpha/2 v^2 + beta g(v):
/// u must minimize H in every cell. The cell minimizer is the prox with
/// q = -grad/alpha, s = beta/alpha. Requires alpha > 0.
[[nodiscard]] PmpResult pmp_residual(const ReducedProblem& prob, const ControlField& u,
                                     const PenaltySpec& pen, double tol = 1e-8);
[[nodiscard]] PmpResult pmp_residual(const Mesh& mesh, const ControlField& u, const ControlField& grad,
                                     const PenaltySpec& pen, double tol = 1e-8);

[[nodiscard]] double l_stationarity_residual(const ReducedProblem& prob, const ControlField& u,
                                             double L, const PenaltySpec& pen);
[[nodiscard]] double l_stationarity_residual(const Mesh& mesh, const ControlField& u,
                                             const ControlField& grad, double L,
                                             const PenaltySpec& pen);

/// Both checks from one gradient evaluation.
[[nodiscard]] StationarityReport certify(const ReducedProblem& prob, const ControlField& u, double L,
                                         const PenaltySpec& pen, double pmp_tol = 1e-8);

enum class GmapBranch { Negative, Zero, Positive };
std::string_view to_string(GmapBranch branch);

struct GmapPoint {
  double z = 0.0;
  double u = 0.0;
  GmapBranch branch = GmapBranch::Zero;
};

struct SampleRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;
};

/// Grid sample of the graph of the stationarity map
///
///   u in G(z)  <=>  u minimizes  v -> -z v + L/2 (v - u)^2 + alpha/2 v^2 + beta g(v),
///
/// with membership certified against a dense brute-force scan in v. A grid
/// pair is a member if the objective at v = u is within objective_tolerance
/// of the scanned minimum. For IntegerIndicator the u grid is replaced by the
/// integers in range; u = 0 is always sampled when in range.
struct GmapSample {
  std::vector<GmapPoint> points;
  double u_spacing = 0.0;
  double objective_tolerance = 0.0;
  double u0 = 0.0;  // sparsity gap of prox_{s g}, s = beta / (L + alpha)
  double q0 = 0.0;
};

[[nodiscard]] GmapSample gmap_sample(double L, const PenaltySpec& pen, SampleRange z_range,
                                     SampleRange u_range, int scan_n = 2001);

}  // namespace proxgrad
