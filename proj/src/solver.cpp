#include "proxgrad/solver.hpp"

#include <cmath>
#include <string>

#include "proxgrad/errors.hpp"
#include "proxgrad/scalar_prox.hpp"

namespace proxgrad {

void SolverConfig::validate() const {
  pen.validate();
  if (!(L > 0.0 && std::isfinite(L))) throw ParameterError("solver: L (or L0) must be positive");
  if (!(theta > 0.0 && theta < 1.0)) throw ParameterError("solver: theta must lie in (0, 1)");
  if (!(eta > 0.0)) throw ParameterError("solver: eta must be positive");
  if (!(stop_tol > 0.0)) throw ParameterError("solver: stop_tol must be positive");
  if (max_iter < 1) throw ParameterError("solver: max_iter must be >= 1");
  if (max_backtracks < 0) throw ParameterError("solver: max_backtracks must be >= 0");
  if (record_omega && (pen.kind != PenaltyKind::LpPower || pen.alpha <= 0.0))
    throw UnsupportedError("omega_m monitoring needs an LpPower penalty with alpha > 0");
}

std::string_view to_string(RunStatus status) {
  switch (status) {
    case RunStatus::Converged: return "converged";
    case RunStatus::MaxIterations: return "max_iterations";
    case RunStatus::LineSearchFailed: return "line_search_failed";
  }
  return "?";
}

ControlField pg_step(const ControlField& u, const ControlField& grad, double L,
                     const PenaltySpec& pen) {
  if (u.values.size() != grad.values.size())
    throw ParameterError("pg_step: control and gradient sizes differ");
  if (!(L > 0.0)) throw ParameterError("pg_step: L must be positive");
  pen.validate();
  const double denom = L + pen.alpha;
  const double s = pen.beta / denom;
  const double b = pen.box_bound;
  ControlField next{Eigen::VectorXd(u.values.size())};
  for (Eigen::Index t = 0; t < u.values.size(); ++t) {
    const double q = (L * u.values[t] - grad.values[t]) / denom;
    if (!std::isfinite(q)) throw NumericError("pg_step: non-finite prox argument");
    double v = 0.0;
    switch (pen.kind) {
      case PenaltyKind::L0: v = prox_l0(q, s, b).value; break;
      case PenaltyKind::LpPower: v = prox_lp(q, s, pen.p, b).value; break;
      case PenaltyKind::LogPenalty: v = prox_log(q, s, pen.log_slope, b).value; break;
      case PenaltyKind::IntegerIndicator: v = prox_integer(q, s, b).value; break;
    }
    next.values[t] = v;
  }
  return next;
}

double total_objective(const Mesh& mesh, double f, const ControlField& u, const PenaltySpec& pen) {
  const double g = penalty_integral(mesh, u, pen);
  if (!std::isfinite(g)) return kInf;
  return f + 0.5 * pen.alpha * control_l2_sq(mesh, u) + (pen.beta == 0.0 ? 0.0 : pen.beta * g);
}

double omega_m_measure(const Mesh& mesh, const ControlField& u, double uI) {
  if (!(uI > 0.0)) throw UnsupportedError("omega_m_measure needs uI > 0 (alpha > 0)");
  Eigen::Index count = 0;
  for (double v : u.values) {
    const double a = std::abs(v);
    if (a > 0.0 && a < uI) ++count;
  }
  return mesh.triangle_area() * static_cast<double>(count);
}

RunResult run(const ReducedProblem& prob, const SolverConfig& cfg, std::optional<ControlField> u_init,
              const IterateObserver& observer) {
  cfg.validate();
  const Mesh& mesh = prob.mesh();
  const PenaltySpec& pen = cfg.pen;
  const double area = mesh.triangle_area();
  const double omega_uI =
      cfg.record_omega ? compute_uI(pen.beta / pen.alpha, pen.p) : 0.0;

  RunResult result;
  result.u = u_init ? std::move(*u_init) : mesh.zero_control();
  if (result.u.values.size() != mesh.num_triangles())
    throw ParameterError("initial control does not match the mesh");
  if (!result.u.values.allFinite()) throw ParameterError("initial control has non-finite entries");

  long state_solves = 0, adjoint_solves = 0;
  result.y = prob.solve_state(result.u);
  ++state_solves;
  double f = prob.tracking_value(result.y);
  double J = total_objective(mesh, f, result.u, pen);
  if (!std::isfinite(J)) throw ParameterError("initial control is infeasible for the penalty");

  auto make_record = [&](int k, double L, double step_sq, double step_l1, double change, int backtracks) {
    IterateRecord r;
    r.k = k;
    r.J = J;
    r.f = f;
    r.penalty = penalty_integral(mesh, result.u, pen);
    r.step_norm = std::sqrt(step_sq);
    r.step_l1 = step_l1;
    r.L = L;
    r.sparsity_gap = k == 0 ? 0.0 : compute_u0(pen.beta / (L + pen.alpha), pen);
    double min_abs = 0.0;
    for (double v : result.u.values) {
      const double a = std::abs(v);
      if (a > 0.0 && (min_abs == 0.0 || a < min_abs)) min_abs = a;
    }
    r.min_nonzero_abs = min_abs;
    r.state_solves = state_solves;
    r.adjoint_solves = adjoint_solves;
    r.pde_solves = state_solves + adjoint_solves;
    r.support_measure = support_measure(mesh, result.u);
    r.support_change = change;
    r.omega_m = cfg.record_omega ? omega_m_measure(mesh, result.u, omega_uI) : 0.0;
    r.backtracks = backtracks;
    result.history.push_back(r);
    if (observer) observer(result.history.back(), result.u);
  };

  make_record(0, 0.0, 0.0, 0.0, 0.0, 0);

  double last_L = cfg.L;
  for (int k = 1; k <= cfg.max_iter; ++k) {
    const ControlField grad = prob.gradient_from_adjoint(prob.solve_adjoint(result.y));
    ++adjoint_solves;

    double L = (cfg.warm_start && k > 1) ? last_L : cfg.L;
    int backtracks = 0;
    ControlField trial;
    StateField y_trial;
    double f_trial = 0.0, J_trial = 0.0, step_sq = 0.0;
    while (true) {
      trial = pg_step(result.u, grad, L, pen);
      y_trial = prob.solve_state(trial);
      ++state_solves;
      f_trial = prob.tracking_value(y_trial);
      J_trial = total_objective(mesh, f_trial, trial, pen);
      step_sq = area * (trial.values - result.u.values).squaredNorm();
      if (cfg.mode == StepMode::FixedL) break;
      if (std::isfinite(J_trial) && cfg.eta * step_sq <= J - J_trial) break;
      if (++backtracks > cfg.max_backtracks) {
        result.status = RunStatus::LineSearchFailed;
        return result;
      }
      L /= cfg.theta;
    }
    last_L = L;

    const double step_l1 = area * (trial.values - result.u.values).lpNorm<1>();
    const double change = support_change(mesh, result.u, trial);
    const double decrease = std::abs(J - J_trial);
    result.u = std::move(trial);
    result.y = std::move(y_trial);
    f = f_trial;
    J = J_trial;
    make_record(k, L, step_sq, step_l1, change, backtracks);
    if (decrease <= cfg.stop_tol) {
      result.status = RunStatus::Converged;
      return result;
    }
  }
  result.status = RunStatus::MaxIterations;
  return result;
}

}  // namespace proxgrad
