#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "proxgrad/pde.hpp"
#include "proxgrad/scalar_prox.hpp"
#include "proxgrad/solver.hpp"
#include "proxgrad/stationarity.hpp"

namespace proxgrad {

enum class ProblemKind { Linear, Semilinear, Integer };

std::string_view to_string(ProblemKind kind);
ProblemKind parse_problem_kind(std::string_view name);

/// Everything needed to reproduce one run. Defaults are the linear example
/// with |u|^p cost (alpha = beta = 0.01, p = 0.5, b = 4, L0 = 1e-4, n = 160).
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Linear;
  PenaltyKind penalty = PenaltyKind::LpPower;
  int n = 160;
  double alpha = 0.01;
  double beta = 0.01;
  double p = 0.5;
  double b = 4.0;
  double log_slope = 1.0;
  StepMode mode = StepMode::Backtracking;
  double L0 = 1e-4;
  double theta = 0.5;
  double eta = 1e-4;
  double stop_tol = 1e-12;
  int max_iter = 10000;
  int max_backtracks = 200;
  bool warm_start = false;
  bool record_omega = false;
  std::string target = "example1";
  std::string output_dir = "out";
  std::uint64_t seed = 42;
  LinearBackend backend = LinearBackend::ConjugateGradient;

  void validate() const;
  [[nodiscard]] PenaltySpec penalty_spec() const;
  [[nodiscard]] SolverConfig solver_config() const;
};

/// Named presets: example1, example2 (semilinear), example3 (integer),
/// table5 (alpha = 0.001, p = 0.9, L0 = 0.005, b = 6).
[[nodiscard]] ExperimentConfig preset_config(std::string_view name);
[[nodiscard]] std::vector<std::string> preset_names();

/// Nodal interpolant of a named desired state: example1, example2, zero.
[[nodiscard]] StateField interpolate_target(const Mesh& mesh, std::string_view id);

[[nodiscard]] ReducedProblem make_problem(const ExperimentConfig& cfg);

struct SolveSummary {
  ExperimentConfig config;
  RunResult run;
  double J = 0.0;
  double f = 0.0;
  double penalty = 0.0;  // N_p: integral of g with beta excluded
  double support = 0.0;
  bool has_report = false;  // stationarity needs alpha > 0
  StationarityReport report;
  bool strong_conv_condition = false;  // LpPower only
  double seconds = 0.0;
};

/// Runs cfg on an already assembled problem (cfg.n and the target must match).
[[nodiscard]] SolveSummary solve_problem(const ReducedProblem& prob, const ExperimentConfig& cfg,
                                         const IterateObserver& observer = {});
[[nodiscard]] SolveSummary solve_experiment(const ExperimentConfig& cfg,
                                            const IterateObserver& observer = {});

/// history.csv, control.csv, state.csv and summary.json under cfg.output_dir.
void write_solve_outputs(const SolveSummary& summary, const ReducedProblem& prob);
void write_history_csv(std::ostream& out, const std::vector<IterateRecord>& history);
[[nodiscard]] std::string summary_json(const SolveSummary& summary);
void print_summary(std::ostream& out, const SolveSummary& summary);

// Table sweeps. Each row is a full solve; rows are independent.
[[nodiscard]] std::vector<SolveSummary> table_p_sweep(int n, const std::vector<double>& ps,
                                                      const IterateObserver& observer = {});
[[nodiscard]] std::vector<SolveSummary> table_mesh_sweep(const std::vector<int>& ns,
                                                         const IterateObserver& observer = {});
[[nodiscard]] std::vector<SolveSummary> table_bad_params(const std::vector<int>& ns,
                                                         const IterateObserver& observer = {});

enum class TableParam { P, MeshSize };
void write_table_csv(std::ostream& out, const std::vector<SolveSummary>& rows, TableParam param);
void write_table_text(std::ostream& out, const std::vector<SolveSummary>& rows, TableParam param);
/// Columns n,h,k,omega_m.
void write_omega_csv(std::ostream& out, const std::vector<SolveSummary>& rows);

struct ProxCurvePoint {
  double q = 0.0;
  ProxResult result;
};
[[nodiscard]] std::vector<ProxCurvePoint> prox_curve(const PenaltySpec& pen, double s, double q_lo,
                                                     double q_hi, int count);
void write_prox_curve_csv(std::ostream& out, const std::vector<ProxCurvePoint>& curve);
void write_gmap_csv(std::ostream& out, const GmapSample& sample);

struct FdCheck {
  double finite_difference = 0.0;
  double adjoint = 0.0;
  double rel_error = 0.0;
};
/// Central differences of f along random directions at a random control.
[[nodiscard]] std::vector<FdCheck> fd_check(const ExperimentConfig& cfg, int directions = 5,
                                            double t = 1e-4);

struct MmsRow {
  int n = 0;
  double h = 0.0;
  double l2_error = 0.0;
  double rate = 0.0;  // log2(e_{previous} / e_n); 0 for the first row
};
/// Manufactured solution y = sin(pi x) sin(pi y) with source -Δy (+ y^3),
/// sampled at triangle centroids.
[[nodiscard]] std::vector<MmsRow> mms_check(StateEquation equation, const std::vector<int>& ns,
                                            LinearBackend backend = LinearBackend::ConjugateGradient);

}  // namespace proxgrad
