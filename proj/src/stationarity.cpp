#include "proxgrad/stationarity.hpp"

#include <algorithm>
#include <cmath>

#include "proxgrad/errors.hpp"
#include "proxgrad/scalar_prox.hpp"
#include "proxgrad/solver.hpp"

namespace proxgrad {

PmpResult pmp_residual(const Mesh& mesh, const ControlField& u, const ControlField& grad,
                       const PenaltySpec& pen, double tol) {
  pen.validate();
  if (!(pen.alpha > 0.0))
    throw UnsupportedError("PMP residual needs alpha > 0 (the cell Hamiltonian may be unbounded)");
  if (u.values.size() != mesh.num_triangles() || grad.values.size() != mesh.num_triangles())
    throw ParameterError("pmp_residual: field sizes do not match the mesh");
  const double s = pen.beta / pen.alpha;
  const double area = mesh.triangle_area();
  PmpResult out;
  for (Eigen::Index t = 0; t < u.values.size(); ++t) {
    const double q = -grad.values[t] / pen.alpha;
    const ProxResult best = prox_scalar(q, s, pen);
    const double gap =
        pen.alpha * (prox_objective(q, s, pen, u.values[t]) - prox_objective(q, s, pen, best.value));
    if (gap > 0.0) out.residual += area * (std::isfinite(gap) ? gap : kInf);
    if (gap > tol) out.violation_measure += area;
  }
  return out;
}

PmpResult pmp_residual(const ReducedProblem& prob, const ControlField& u, const PenaltySpec& pen,
                       double tol) {
  return pmp_residual(prob.mesh(), u, prob.reduced_gradient(u), pen, tol);
}

double l_stationarity_residual(const Mesh& mesh, const ControlField& u, const ControlField& grad,
                               double L, const PenaltySpec& pen) {
  const ControlField next = pg_step(u, grad, L, pen);
  return std::sqrt(mesh.triangle_area() * (u.values - next.values).squaredNorm());
}

double l_stationarity_residual(const ReducedProblem& prob, const ControlField& u, double L,
                               const PenaltySpec& pen) {
  return l_stationarity_residual(prob.mesh(), u, prob.reduced_gradient(u), L, pen);
}

StationarityReport certify(const ReducedProblem& prob, const ControlField& u, double L,
                           const PenaltySpec& pen, double pmp_tol) {
  const ControlField grad = prob.reduced_gradient(u);
  StationarityReport r;
  r.L = L;
  r.l_stat_residual = l_stationarity_residual(prob.mesh(), u, grad, L, pen);
  const PmpResult pmp = pmp_residual(prob.mesh(), u, grad, pen, pmp_tol);
  r.pmp_residual = pmp.residual;
  r.pmp_violation_measure = pmp.violation_measure;
  return r;
}

std::string_view to_string(GmapBranch branch) {
  switch (branch) {
    case GmapBranch::Negative: return "-";
    case GmapBranch::Zero: return "0";
    case GmapBranch::Positive: return "+";
  }
  return "?";
}

GmapSample gmap_sample(double L, const PenaltySpec& pen, SampleRange z_range, SampleRange u_range,
                       int scan_n) {
  pen.validate();
  if (!(L > 0.0)) throw ParameterError("gmap_sample: L must be positive");
  if (z_range.count < 1 || u_range.count < 2 || !(u_range.hi > u_range.lo) ||
      z_range.hi < z_range.lo)
    throw ParameterError("gmap_sample: invalid sample ranges");

  const double denom = L + pen.alpha;
  const double s = pen.beta / denom;
  PenaltySpec inner = pen;
  inner.alpha = 0.0;

  std::vector<double> us;
  if (pen.kind == PenaltyKind::IntegerIndicator) {
    for (double v = std::ceil(u_range.lo); v <= u_range.hi; v += 1.0) us.push_back(v);
  } else {
    for (int j = 0; j < u_range.count; ++j)
      us.push_back(u_range.lo + (u_range.hi - u_range.lo) * j / (u_range.count - 1));
    if (u_range.lo <= 0.0 && u_range.hi >= 0.0) us.push_back(0.0);
    std::sort(us.begin(), us.end());
    us.erase(std::unique(us.begin(), us.end()), us.end());
  }

  GmapSample out;
  out.u_spacing = pen.kind == PenaltyKind::IntegerIndicator
                      ? 1.0
                      : (u_range.hi - u_range.lo) / (u_range.count - 1);
  out.objective_tolerance = 0.5 * denom * std::pow(0.5 * out.u_spacing, 2);
  out.u0 = compute_u0(s, inner);
  out.q0 = compute_q0(s, inner);

  for (int i = 0; i < z_range.count; ++i) {
    const double z = z_range.count == 1
                         ? z_range.lo
                         : z_range.lo + (z_range.hi - z_range.lo) * i / (z_range.count - 1);
    for (double u : us) {
      // -z v + L/2 (v - u)^2 + alpha/2 v^2 + beta g(v) = denom * h_{q,s}(v) + const
      const double q = (z + L * u) / denom;
      const double hu = prox_objective(q, s, inner, u);
      if (!std::isfinite(hu)) continue;
      const double v = brute_force_prox(q, s, inner, scan_n);
      const double gap = denom * (hu - prox_objective(q, s, inner, v));
      if (gap > out.objective_tolerance) continue;
      const GmapBranch branch =
          u > 0.0 ? GmapBranch::Positive : (u < 0.0 ? GmapBranch::Negative : GmapBranch::Zero);
      out.points.push_back({z, u, branch});
    }
  }
  return out;
}

}  // namespace proxgrad
