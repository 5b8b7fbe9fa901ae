#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "proxgrad/pde.hpp"
#include "proxgrad/penalty.hpp"

namespace proxgrad {

enum class StepMode {
  FixedL,        // constant L
  Backtracking,  // L_k = L0 theta^{-i}, smallest i passing the decrease test
};

struct SolverConfig {
  StepMode mode = StepMode::Backtracking;
  double L = 1e-4;  // fixed L, or the initial L0 of every backtracking search
  double theta = 0.5;
  double eta = 1e-4;
  double stop_tol = 1e-12;  // on |J_{k+1} - J_k|
  int max_iter = 10000;
  int max_backtracks = 200;
  /// Start each backtracking search from the previous L_k instead of L0.
  bool warm_start = false;
  PenaltySpec pen;
  /// Record |{0 < |u_k| < uI}| per iterate (LpPower with alpha > 0).
  bool record_omega = false;

  void validate() const;
};

/// Diagnostics of one accepted iterate. k = 0 is the initial control.
struct IterateRecord {
  int k = 0;
  double J = 0.0;  // f + alpha/2 ||u||^2 + beta * penalty
  double f = 0.0;
  double penalty = 0.0;  // integral of g, beta excluded
  double step_norm = 0.0;   // ||u_k - u_{k-1}||_{L^2}
  double step_l1 = 0.0;     // ||u_k - u_{k-1}||_{L^1}
  double L = 0.0;           // L_k that produced this iterate
  double sparsity_gap = 0.0;        // u0(beta / (L_k + alpha))
  double min_nonzero_abs = 0.0;     // smallest nonzero |u_k|, 0 if u_k = 0
  long state_solves = 0;    // cumulative
  long adjoint_solves = 0;  // cumulative
  long pde_solves = 0;      // state + adjoint, cumulative
  double support_measure = 0.0;
  double support_change = 0.0;
  double omega_m = 0.0;
  int backtracks = 0;  // rejected trial steps in this iteration
};

enum class RunStatus { Converged, MaxIterations, LineSearchFailed };

std::string_view to_string(RunStatus status);

struct RunResult {
  ControlField u;
  StateField y;
  std::vector<IterateRecord> history;
  RunStatus status = RunStatus::MaxIterations;

  [[nodiscard]] bool converged() const { return status == RunStatus::Converged; }
  [[nodiscard]] int iterations() const { return static_cast<int>(history.size()) - 1; }
  [[nodiscard]] const IterateRecord& final_record() const { return history.back(); }
};

/// Called with every recorded iterate (including k = 0).
using IterateObserver = std::function<void(const IterateRecord&, const ControlField&)>;

/// One forward-backward step applied cellwise:
///   u_T <- prox_{s g}(q_T),  q_T = (L u_T - grad_T) / (L + alpha),  s = beta / (L + alpha).
[[nodiscard]] ControlField pg_step(const ControlField& u, const ControlField& grad, double L,
                                   const PenaltySpec& pen);

/// J(u) = f + alpha/2 ||u||^2 + beta * penalty_integral; +inf if infeasible.
[[nodiscard]] double total_objective(const Mesh& mesh, double f, const ControlField& u,
                                     const PenaltySpec& pen);

/// Measure of {0 < |u| < uI}.
[[nodiscard]] double omega_m_measure(const Mesh& mesh, const ControlField& u, double uI);

/// Proximal gradient iteration from u_init (default zero). Each state solve
/// is counted once; the gradient at an accepted iterate reuses the state of
/// the trial that produced it and costs one adjoint solve.
[[nodiscard]] RunResult run(const ReducedProblem& prob, const SolverConfig& cfg,
                            std::optional<ControlField> u_init = std::nullopt,
                            const IterateObserver& observer = {});

}  // namespace proxgrad
