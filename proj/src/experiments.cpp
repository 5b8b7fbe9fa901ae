#include "proxgrad/experiments.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <random>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <json.hpp>

#include "proxgrad/errors.hpp"

namespace proxgrad {

namespace {

using Clock = std::chrono::steady_clock;

void require(bool ok, const char* what) {
  if (!ok) throw ParameterError(what);
}

}  // namespace

std::string_view to_string(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Linear: return "linear";
    case ProblemKind::Semilinear: return "semilinear";
    case ProblemKind::Integer: return "integer";
  }
  return "?";
}

ProblemKind parse_problem_kind(std::string_view name) {
  if (name == "linear") return ProblemKind::Linear;
  if (name == "semilinear") return ProblemKind::Semilinear;
  if (name == "integer") return ProblemKind::Integer;
  throw ParameterError("unknown problem kind '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  require(n >= 2, "n must be >= 2");
  require(problem != ProblemKind::Integer || penalty == PenaltyKind::IntegerIndicator,
          "the integer problem uses the integer penalty");
  penalty_spec().validate();
  solver_config().validate();
  if (target != "example1" && target != "example2" && target != "zero")
    throw ParameterError("unknown target id '" + target + "'");
}

PenaltySpec ExperimentConfig::penalty_spec() const {
  PenaltySpec pen;
  pen.kind = penalty;
  pen.p = p;
  pen.log_slope = log_slope;
  pen.box_bound = b;
  pen.alpha = alpha;
  pen.beta = beta;
  return pen;
}

SolverConfig ExperimentConfig::solver_config() const {
  SolverConfig s;
  s.mode = mode;
  s.L = L0;
  s.theta = theta;
  s.eta = eta;
  s.stop_tol = stop_tol;
  s.max_iter = max_iter;
  s.max_backtracks = max_backtracks;
  s.warm_start = warm_start;
  s.pen = penalty_spec();
  s.record_omega = record_omega;
  return s;
}

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig cfg;
  if (name == "example1") return cfg;
  if (name == "table5") {
    cfg.alpha = 0.001;
    cfg.p = 0.9;
    cfg.L0 = 0.005;
    cfg.b = 6.0;
    cfg.record_omega = true;
    return cfg;
  }
  if (name == "example2") {
    cfg.problem = ProblemKind::Semilinear;
    cfg.alpha = 0.002;
    cfg.beta = 0.03;
    cfg.b = 12.0;
    cfg.L0 = 0.001;
    cfg.target = "example2";
    return cfg;
  }
  if (name == "example3") {
    cfg.problem = ProblemKind::Integer;
    cfg.penalty = PenaltyKind::IntegerIndicator;
    cfg.b = 2.0;
    cfg.L0 = 0.001;
    return cfg;
  }
  throw ParameterError("unknown preset '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"example1", "example2", "example3", "table5"}; }

StateField interpolate_target(const Mesh& mesh, std::string_view id) {
  using std::numbers::pi;
  std::function<double(double, double)> fn;
  if (id == "example1") {
    fn = [](double x, double y) { return 10.0 * x * std::sin(5.0 * x) * std::cos(7.0 * y); };
  } else if (id == "example2") {
    fn = [](double x, double y) {
      return 4.0 * std::sin(2.0 * pi * x) * std::sin(pi * y) * std::exp(x);
    };
  } else if (id == "zero") {
    fn = [](double, double) { return 0.0; };
  } else {
    throw ParameterError("unknown target id '" + std::string(id) + "'");
  }
  StateField yd{Eigen::VectorXd(mesh.num_nodes())};
  for (int i = 0; i < mesh.num_nodes(); ++i) yd.values[i] = fn(mesh.nodes()[i].x(), mesh.nodes()[i].y());
  return yd;
}

ReducedProblem make_problem(const ExperimentConfig& cfg) {
  cfg.validate();
  Mesh mesh(cfg.n);
  StateField yd = interpolate_target(mesh, cfg.target);
  PdeOptions opts;
  opts.backend = cfg.backend;
  const auto eq =
      cfg.problem == ProblemKind::Semilinear ? StateEquation::Semilinear : StateEquation::Linear;
  return ReducedProblem(std::move(mesh), eq, std::move(yd), opts);
}

SolveSummary solve_problem(const ReducedProblem& prob, const ExperimentConfig& cfg,
                           const IterateObserver& observer) {
  const auto start = Clock::now();
  SolveSummary s;
  s.config = cfg;
  s.run = run(prob, cfg.solver_config(), std::nullopt, observer);
  const auto& last = s.run.final_record();
  s.J = last.J;
  s.f = last.f;
  s.penalty = last.penalty;
  s.support = last.support_measure;
  const PenaltySpec pen = cfg.penalty_spec();
  if (pen.alpha > 0.0) {
    s.has_report = true;
    const double L = last.L > 0.0 ? last.L : cfg.L0;
    s.report = certify(prob, s.run.u, L, pen);
  }
  if (pen.kind == PenaltyKind::LpPower && pen.alpha >= 0.0)
    s.strong_conv_condition = check_strong_conv_condition(cfg.L0, pen.alpha, pen.p);
  s.seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return s;
}

SolveSummary solve_experiment(const ExperimentConfig& cfg, const IterateObserver& observer) {
  const ReducedProblem prob = make_problem(cfg);
  return solve_problem(prob, cfg, observer);
}

void write_history_csv(std::ostream& out, const std::vector<IterateRecord>& history) {
  out << "k,J,f,penalty,step_norm,L_k,pde_solves,state_solves,adjoint_solves,support_measure,"
         "support_change,omega_m,backtracks\n";
  for (const auto& r : history) {
    fmt::print(out, "{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{:.17g},{:.17g},{:.17g},{}\n",
               r.k, r.J, r.f, r.penalty, r.step_norm, r.L, r.pde_solves, r.state_solves,
               r.adjoint_solves, r.support_measure, r.support_change, r.omega_m, r.backtracks);
  }
}

std::string summary_json(const SolveSummary& s) {
  const auto& c = s.config;
  const auto& last = s.run.final_record();
  nlohmann::ordered_json j;
  j["config"] = {{"problem", to_string(c.problem)},
                 {"penalty", to_string(c.penalty)},
                 {"n", c.n},
                 {"h", std::sqrt(2.0) / c.n},
                 {"alpha", c.alpha},
                 {"beta", c.beta},
                 {"p", c.p},
                 {"b", std::isfinite(c.b) ? nlohmann::ordered_json(c.b) : nlohmann::ordered_json("inf")},
                 {"mode", c.mode == StepMode::Backtracking ? "backtracking" : "fixed"},
                 {"L0", c.L0},
                 {"target", c.target}};
  j["status"] = to_string(s.run.status);
  j["iterations"] = s.run.iterations();
  j["J"] = s.J;
  j["f"] = s.f;
  j["N_p"] = s.penalty;
  j["support_measure"] = s.support;
  j["pde_solves"] = last.pde_solves;
  j["state_solves"] = last.state_solves;
  j["adjoint_solves"] = last.adjoint_solves;
  j["final_L"] = last.L;
  if (s.has_report) {
    j["stationarity"] = {{"L", s.report.L},
                         {"l_stat_residual", s.report.l_stat_residual},
                         {"pmp_residual", s.report.pmp_residual},
                         {"pmp_violation_measure", s.report.pmp_violation_measure}};
  }
  if (c.penalty == PenaltyKind::LpPower) j["strong_conv_condition"] = s.strong_conv_condition;
  return j.dump(2);
}

void print_summary(std::ostream& out, const SolveSummary& s) {
  const auto& last = s.run.final_record();
  fmt::print(out, "problem      {} ({} penalty), n = {}, h = {:.5f}\n", to_string(s.config.problem),
             to_string(s.config.penalty), s.config.n, std::sqrt(2.0) / s.config.n);
  fmt::print(out, "status       {} after {} iterations\n", to_string(s.run.status), s.run.iterations());
  fmt::print(out, "J(u*)        {:.6f}\n", s.J);
  fmt::print(out, "N(u*)        {:.6f}\n", s.penalty);
  fmt::print(out, "support      {:.6f}\n", s.support);
  fmt::print(out, "pde solves   {} ({} state + {} adjoint)\n", last.pde_solves, last.state_solves,
             last.adjoint_solves);
  if (s.has_report) {
    fmt::print(out, "L-stat res.  {:.3e} (L = {:g})\n", s.report.l_stat_residual, s.report.L);
    fmt::print(out, "PMP residual {:.3e}, violation measure {:.3e}\n", s.report.pmp_residual,
               s.report.pmp_violation_measure);
  }
  fmt::print(out, "time         {:.2f} s\n", s.seconds);
}

void write_solve_outputs(const SolveSummary& summary, const ReducedProblem& prob) {
  namespace fs = std::filesystem;
  const fs::path dir(summary.config.output_dir);
  fs::create_directories(dir);
  {
    std::ofstream out(dir / "history.csv");
    write_history_csv(out, summary.run.history);
  }
  {
    std::ofstream out(dir / "control.csv");
    write_control_csv(out, prob.mesh(), summary.run.u);
  }
  {
    std::ofstream out(dir / "state.csv");
    write_state_csv(out, prob.mesh(), summary.run.y);
  }
  std::ofstream out(dir / "summary.json");
  out << summary_json(summary) << '\n';
}

std::vector<SolveSummary> table_p_sweep(int n, const std::vector<double>& ps,
                                        const IterateObserver& observer) {
  std::vector<SolveSummary> rows;
  ExperimentConfig cfg = preset_config("example1");
  cfg.n = n;
  const ReducedProblem prob = make_problem(cfg);
  for (double p : ps) {
    cfg.p = p;
    cfg.validate();
    rows.push_back(solve_problem(prob, cfg, observer));
  }
  return rows;
}

std::vector<SolveSummary> table_mesh_sweep(const std::vector<int>& ns, const IterateObserver& observer) {
  std::vector<SolveSummary> rows;
  for (int n : ns) {
    ExperimentConfig cfg = preset_config("example1");
    cfg.n = n;
    rows.push_back(solve_experiment(cfg, observer));
  }
  return rows;
}

std::vector<SolveSummary> table_bad_params(const std::vector<int>& ns, const IterateObserver& observer) {
  std::vector<SolveSummary> rows;
  for (int n : ns) {
    ExperimentConfig cfg = preset_config("table5");
    cfg.n = n;
    rows.push_back(solve_experiment(cfg, observer));
  }
  return rows;
}

void write_table_csv(std::ostream& out, const std::vector<SolveSummary>& rows, TableParam param) {
  out << (param == TableParam::P ? "p" : "h")
      << ",n,J,N_p,iterations,pde_solves,state_solves,adjoint_solves,status\n";
  for (const auto& r : rows) {
    const auto& last = r.run.final_record();
    const double key = param == TableParam::P ? r.config.p : std::sqrt(2.0) / r.config.n;
    fmt::print(out, "{:.17g},{},{:.17g},{:.17g},{},{},{},{},{}\n", key, r.config.n, r.J, r.penalty,
               r.run.iterations(), last.pde_solves, last.state_solves, last.adjoint_solves,
               to_string(r.run.status));
  }
}

void write_table_text(std::ostream& out, const std::vector<SolveSummary>& rows, TableParam param) {
  fmt::print(out, "{:>10} {:>6} {:>10} {:>10} {:>6} {:>8}\n", param == TableParam::P ? "p" : "h", "n",
             "J(u*)", "N_p(u*)", "iter", "no. pde");
  for (const auto& r : rows) {
    const auto& last = r.run.final_record();
    const double key = param == TableParam::P ? r.config.p : std::sqrt(2.0) / r.config.n;
    fmt::print(out, "{:>10.5g} {:>6} {:>10.4f} {:>10.4f} {:>6} {:>8}\n", key, r.config.n, r.J,
               r.penalty, r.run.iterations(), last.pde_solves);
  }
}

void write_omega_csv(std::ostream& out, const std::vector<SolveSummary>& rows) {
  out << "n,h,k,omega_m\n";
  for (const auto& r : rows) {
    for (const auto& rec : r.run.history) {
      fmt::print(out, "{},{:.17g},{},{:.17g}\n", r.config.n, std::sqrt(2.0) / r.config.n, rec.k,
                 rec.omega_m);
    }
  }
}

std::vector<ProxCurvePoint> prox_curve(const PenaltySpec& pen, double s, double q_lo, double q_hi,
                                       int count) {
  if (count < 2 || !(q_hi > q_lo)) throw ParameterError("prox_curve: invalid q range");
  std::vector<ProxCurvePoint> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double q = q_lo + (q_hi - q_lo) * i / (count - 1);
    out.push_back({q, prox_scalar(q, s, pen)});
  }
  return out;
}

void write_prox_curve_csv(std::ostream& out, const std::vector<ProxCurvePoint>& curve) {
  out << "q,value,tie\n";
  for (const auto& pt : curve)
    fmt::print(out, "{:.17g},{:.17g},{}\n", pt.q, pt.result.value, pt.result.tie ? 1 : 0);
}

void write_gmap_csv(std::ostream& out, const GmapSample& sample) {
  out << "z,u,branch\n";
  for (const auto& pt : sample.points) fmt::print(out, "{:.17g},{:.17g},{}\n", pt.z, pt.u, to_string(pt.branch));
}

std::vector<FdCheck> fd_check(const ExperimentConfig& cfg, int directions, double t) {
  if (directions < 1 || !(t > 0.0)) throw ParameterError("fd_check: invalid arguments");
  const ReducedProblem prob = make_problem(cfg);
  const Mesh& mesh = prob.mesh();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  ControlField u{Eigen::VectorXd(mesh.num_triangles())};
  for (auto& v : u.values) v = 2.0 * dist(rng);
  const ControlField grad = prob.reduced_gradient(u);
  std::vector<FdCheck> out;
  for (int d = 0; d < directions; ++d) {
    ControlField dir{Eigen::VectorXd(mesh.num_triangles())};
    for (auto& v : dir.values) v = dist(rng);
    const ControlField plus{u.values + t * dir.values};
    const ControlField minus{u.values - t * dir.values};
    FdCheck c;
    c.finite_difference = (prob.reduced_value(plus) - prob.reduced_value(minus)) / (2.0 * t);
    c.adjoint = mesh.triangle_area() * grad.values.dot(dir.values);
    c.rel_error = std::abs(c.finite_difference - c.adjoint) / std::abs(c.adjoint);
    out.push_back(c);
  }
  return out;
}

std::vector<MmsRow> mms_check(StateEquation equation, const std::vector<int>& ns, LinearBackend backend) {
  using std::numbers::pi;
  auto exact = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  std::vector<MmsRow> rows;
  for (int n : ns) {
    Mesh mesh(n);
    ControlField u{Eigen::VectorXd(mesh.num_triangles())};
    for (int t = 0; t < mesh.num_triangles(); ++t) {
      const auto c = mesh.centroid(t);
      const double ys = exact(c.x(), c.y());
      u.values[t] = 2.0 * pi * pi * ys + (equation == StateEquation::Semilinear ? ys * ys * ys : 0.0);
    }
    PdeOptions opts;
    opts.backend = backend;
    StateField zero = mesh.zero_state();
    const ReducedProblem prob(mesh, equation, std::move(zero), opts);
    MmsRow row;
    row.n = n;
    row.h = mesh.h();
    row.l2_error = l2_error(mesh, prob.solve_state(u), exact);
    if (!rows.empty()) row.rate = std::log2(rows.back().l2_error / row.l2_error);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace proxgrad
