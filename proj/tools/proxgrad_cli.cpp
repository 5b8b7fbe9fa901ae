// Command-line front end: single solves, table sweeps, prox / stationarity
// map samplers and the FEM self-checks.
//
// Exit codes: 0 success, 2 configuration or parameter error, 3 numeric failure.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "proxgrad/config.hpp"
#include "proxgrad/experiments.hpp"

namespace fs = std::filesystem;
using namespace proxgrad;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;

struct RunOptions {
  std::string config_file;
  std::string preset;
  std::vector<std::string> overrides;
  std::string output_dir;
  int n = 0;
};

void add_run_options(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("-c,--config", o.config_file, "key = value configuration file");
  cmd->add_option("--preset", o.preset, "example1 | example2 | example3 | table5");
  cmd->add_option("-s,--set", o.overrides, "override a config field, KEY=VALUE (repeatable)");
  cmd->add_option("-o,--output-dir", o.output_dir, "directory for CSV / JSON artifacts");
  cmd->add_option("-n,--cells", o.n, "cells per side of the mesh");
}

ExperimentConfig resolve(const RunOptions& o) {
  ExperimentConfig cfg;
  if (!o.preset.empty()) cfg = preset_config(o.preset);
  if (!o.config_file.empty()) cfg = load_config_file(o.config_file, cfg);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects KEY=VALUE, got '" + kv + "'");
    try {
      apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    } catch (const ParameterError& e) {
      throw ConfigError("--set " + kv + ": " + e.what());
    }
  }
  if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
  if (o.n > 0) cfg.n = o.n;
  cfg.validate();
  return cfg;
}

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  fn(out);
}

void emit_table(const std::vector<SolveSummary>& rows, TableParam param, const std::string& dir,
                const std::string& stem) {
  fs::create_directories(dir);
  {
    std::ofstream csv(fs::path(dir) / (stem + ".csv"));
    write_table_csv(csv, rows, param);
  }
  std::ofstream txt(fs::path(dir) / (stem + ".txt"));
  write_table_text(txt, rows, param);
  write_table_text(std::cout, rows, param);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proximal gradient solver for sparse optimal control"};
  app.require_subcommand(1);

  RunOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "run one configuration and write its artifacts");
  add_run_options(solve, solve_opts);

  std::string table_dir = "out";
  int table_p_n = 500;
  std::vector<double> table_ps{0.5, 0.3, 0.1, 0.01, 0.001};
  auto* table_p = app.add_subcommand("table-p", "decreasing p sweep (|u|^p cost)");
  table_p->add_option("-n,--cells", table_p_n, "cells per side")->capture_default_str();
  table_p->add_option("--ps", table_ps, "exponents")->capture_default_str();
  table_p->add_option("-o,--output-dir", table_dir)->capture_default_str();

  std::vector<int> mesh_ns{20, 40, 80, 160, 320, 640};
  auto* table_mesh = app.add_subcommand("table-mesh", "mesh refinement sweep at p = 0.5");
  table_mesh->add_option("--ns", mesh_ns, "cells per side for each row")->capture_default_str();
  table_mesh->add_option("-o,--output-dir", table_dir)->capture_default_str();

  std::vector<int> bad_ns{160, 320, 640};
  auto* table_bad = app.add_subcommand("table-bad", "alpha = 0.001, p = 0.9, L0 = 0.005 regime");
  table_bad->add_option("--ns", bad_ns, "cells per side for each row")->capture_default_str();
  table_bad->add_option("-o,--output-dir", table_dir)->capture_default_str();

  std::string penalty_name = "lp", curve_out;
  double curve_s = 0.5, curve_p = 0.5, curve_b = 2.0, curve_a = 1.0, q_min = -4.0, q_max = 4.0;
  int curve_count = 801;
  auto* prox_cmd = app.add_subcommand("prox-curve", "sample q -> prox_{s g}(q) as CSV (q,value,tie)");
  prox_cmd->add_option("--penalty", penalty_name, "l0 | lp | log | integer")->capture_default_str();
  prox_cmd->add_option("--s", curve_s)->capture_default_str();
  prox_cmd->add_option("--p", curve_p)->capture_default_str();
  prox_cmd->add_option("--b", curve_b, "box bound (inf allowed)")->capture_default_str();
  prox_cmd->add_option("--log-slope", curve_a)->capture_default_str();
  prox_cmd->add_option("--q-min", q_min)->capture_default_str();
  prox_cmd->add_option("--q-max", q_max)->capture_default_str();
  prox_cmd->add_option("--count", curve_count)->capture_default_str();
  prox_cmd->add_option("--output", curve_out, "CSV path, '-' for stdout");

  double gmap_L = 0.1, gmap_alpha = 0.01, gmap_beta = 0.01, gmap_b = 2.0, gmap_p = 0.8;
  double z_min = -0.2, z_max = 0.2, u_min = -2.0, u_max = 2.0;
  int z_count = 161, u_count = 401, scan_n = 2001;
  std::string gmap_out, gmap_penalty = "lp";
  auto* gmap_cmd = app.add_subcommand("gmap-curve", "sample the stationarity map as CSV (z,u,branch)");
  gmap_cmd->add_option("--penalty", gmap_penalty)->capture_default_str();
  gmap_cmd->add_option("--L", gmap_L)->capture_default_str();
  gmap_cmd->add_option("--alpha", gmap_alpha)->capture_default_str();
  gmap_cmd->add_option("--beta", gmap_beta)->capture_default_str();
  gmap_cmd->add_option("--b", gmap_b)->capture_default_str();
  gmap_cmd->add_option("--p", gmap_p)->capture_default_str();
  gmap_cmd->add_option("--log-slope", curve_a)->capture_default_str();
  gmap_cmd->add_option("--z-min", z_min)->capture_default_str();
  gmap_cmd->add_option("--z-max", z_max)->capture_default_str();
  gmap_cmd->add_option("--z-count", z_count)->capture_default_str();
  gmap_cmd->add_option("--u-min", u_min)->capture_default_str();
  gmap_cmd->add_option("--u-max", u_max)->capture_default_str();
  gmap_cmd->add_option("--u-count", u_count)->capture_default_str();
  gmap_cmd->add_option("--scan", scan_n, "brute-force scan resolution")->capture_default_str();
  gmap_cmd->add_option("--output", gmap_out, "CSV path, '-' for stdout");

  RunOptions fd_opts;
  fd_opts.n = 40;
  int fd_dirs = 5;
  double fd_t = 1e-4;
  auto* fd_cmd = app.add_subcommand("fd-check", "central differences against the adjoint gradient");
  add_run_options(fd_cmd, fd_opts);
  fd_cmd->add_option("--directions", fd_dirs)->capture_default_str();
  fd_cmd->add_option("--t", fd_t)->capture_default_str();

  std::string mms_eq = "both";
  std::vector<int> mms_ns{32, 64, 128};
  auto* mms_cmd = app.add_subcommand("mms-check", "manufactured-solution convergence of the state solver");
  mms_cmd->add_option("--equation", mms_eq, "linear | semilinear | both")->capture_default_str();
  mms_cmd->add_option("--ns", mms_ns)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (solve->parsed()) {
      const ExperimentConfig cfg = resolve(solve_opts);
      const ReducedProblem prob = make_problem(cfg);
      const SolveSummary summary = solve_problem(prob, cfg);
      write_solve_outputs(summary, prob);
      print_summary(std::cout, summary);
      fmt::print("artifacts    {}\n", cfg.output_dir);
      return summary.run.status == RunStatus::LineSearchFailed ? kExitNumeric : 0;
    }
    if (table_p->parsed()) {
      emit_table(table_p_sweep(table_p_n, table_ps), TableParam::P, table_dir, "table_p");
      return 0;
    }
    if (table_mesh->parsed()) {
      emit_table(table_mesh_sweep(mesh_ns), TableParam::MeshSize, table_dir, "table_mesh");
      return 0;
    }
    if (table_bad->parsed()) {
      const auto rows = table_bad_params(bad_ns);
      emit_table(rows, TableParam::MeshSize, table_dir, "table_bad");
      std::ofstream omega(fs::path(table_dir) / "omega.csv");
      write_omega_csv(omega, rows);
      const auto& c = rows.front().config;
      fmt::print("L0 <= (2/p - 1) alpha: {}\n",
                 check_strong_conv_condition(c.L0, c.alpha, c.p) ? "yes" : "no");
      return 0;
    }
    if (prox_cmd->parsed()) {
      PenaltySpec pen;
      pen.kind = parse_penalty_kind(penalty_name);
      pen.p = curve_p;
      pen.box_bound = curve_b;
      pen.log_slope = curve_a;
      const auto curve = prox_curve(pen, curve_s, q_min, q_max, curve_count);
      with_output(curve_out, [&](std::ostream& out) { write_prox_curve_csv(out, curve); });
      return 0;
    }
    if (gmap_cmd->parsed()) {
      PenaltySpec pen;
      pen.kind = parse_penalty_kind(gmap_penalty);
      pen.p = gmap_p;
      pen.box_bound = gmap_b;
      pen.alpha = gmap_alpha;
      pen.beta = gmap_beta;
      pen.log_slope = curve_a;
      const auto sample =
          gmap_sample(gmap_L, pen, {z_min, z_max, z_count}, {u_min, u_max, u_count}, scan_n);
      with_output(gmap_out, [&](std::ostream& out) { write_gmap_csv(out, sample); });
      std::cerr << fmt::format("{} members, u0 = {:.6g}, q0 = {:.6g}, objective tol = {:.3g}\n",
                               sample.points.size(), sample.u0, sample.q0, sample.objective_tolerance);
      return 0;
    }
    if (fd_cmd->parsed()) {
      const ExperimentConfig cfg = resolve(fd_opts);
      const auto checks = fd_check(cfg, fd_dirs, fd_t);
      bool ok = true;
      fmt::print("{:>4} {:>22} {:>22} {:>10}\n", "dir", "central difference", "adjoint", "rel.err");
      for (std::size_t i = 0; i < checks.size(); ++i) {
        fmt::print("{:>4} {:>22.15g} {:>22.15g} {:>10.2e}\n", i, checks[i].finite_difference,
                   checks[i].adjoint, checks[i].rel_error);
        ok = ok && checks[i].rel_error <= 1e-5;
      }
      return ok ? 0 : kExitNumeric;
    }
    if (mms_cmd->parsed()) {
      std::vector<std::pair<std::string, StateEquation>> eqs;
      if (mms_eq == "linear" || mms_eq == "both") eqs.emplace_back("linear", StateEquation::Linear);
      if (mms_eq == "semilinear" || mms_eq == "both")
        eqs.emplace_back("semilinear", StateEquation::Semilinear);
      if (eqs.empty()) throw ConfigError("--equation must be linear, semilinear or both");
      for (const auto& [name, eq] : eqs) {
        fmt::print("{}\n{:>6} {:>10} {:>14} {:>8}\n", name, "n", "h", "L2 error", "rate");
        for (const auto& row : mms_check(eq, mms_ns))
          fmt::print("{:>6} {:>10.5f} {:>14.6e} {:>8.3f}\n", row.n, row.h, row.l2_error, row.rate);
      }
      return 0;
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}
