#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "proxgrad/config.hpp"
#include "proxgrad/errors.hpp"
#include "proxgrad/experiments.hpp"

using namespace proxgrad;

namespace {

std::string error_of(const std::string& text) {
  std::istringstream in(text);
  try {
    (void)parse_config(in, "run.cfg");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("presets") {
  const ExperimentConfig ex1 = preset_config("example1");
  CHECK(ex1.n == 160);
  CHECK(ex1.alpha == 0.01);
  CHECK(ex1.beta == 0.01);
  CHECK(ex1.p == 0.5);
  CHECK(ex1.b == 4.0);
  CHECK(ex1.L0 == 1e-4);

  const ExperimentConfig ex2 = preset_config("example2");
  CHECK(ex2.problem == ProblemKind::Semilinear);
  CHECK(ex2.alpha == 0.002);
  CHECK(ex2.beta == 0.03);
  CHECK(ex2.b == 12.0);
  CHECK(ex2.target == "example2");

  const ExperimentConfig ex3 = preset_config("example3");
  CHECK(ex3.penalty == PenaltyKind::IntegerIndicator);
  CHECK(ex3.b == 2.0);
  CHECK(ex3.L0 == 0.001);

  const ExperimentConfig t5 = preset_config("table5");
  CHECK(t5.alpha == 0.001);
  CHECK(t5.p == 0.9);
  CHECK(t5.L0 == 0.005);
  CHECK(t5.b == 6.0);
  CHECK_FALSE(check_strong_conv_condition(t5.L0, t5.alpha, t5.p));

  for (const auto& name : preset_names()) CHECK_NOTHROW(preset_config(name).validate());
  CHECK_THROWS_AS((void)preset_config("example4"), ParameterError);
}

TEST_CASE("parse a config file") {
  std::istringstream in(R"(# sweep point
preset = table5
n = 40          # coarse
alpha=0.002
b = inf
mode = fixed
L0 = 0.25
target = zero
backend = cholesky
warm_start = yes
seed = 123
)");
  const ExperimentConfig cfg = parse_config(in, "inline");
  CHECK(cfg.n == 40);
  CHECK(cfg.alpha == 0.002);
  CHECK(cfg.p == 0.9);  // from the preset
  CHECK(std::isinf(cfg.b));
  CHECK(cfg.mode == StepMode::FixedL);
  CHECK(cfg.L0 == 0.25);
  CHECK(cfg.target == "zero");
  CHECK(cfg.backend == LinearBackend::Cholesky);
  CHECK(cfg.warm_start);
  CHECK(cfg.seed == 123u);
}

TEST_CASE("settings apply on top of a base") {
  ExperimentConfig base = preset_config("example3");
  base.output_dir = "keep";
  std::istringstream in("n = 8\n");
  const ExperimentConfig cfg = parse_config(in, "inline", base);
  CHECK(cfg.penalty == PenaltyKind::IntegerIndicator);
  CHECK(cfg.n == 8);

  ExperimentConfig c2 = base;
  apply_setting(c2, "preset", "example1");
  CHECK(c2.output_dir == "keep");
  CHECK(c2.penalty == PenaltyKind::LpPower);
}

TEST_CASE("diagnostics carry source and line") {
  CHECK(error_of("n = 4\nalpha 0.1\n").rfind("run.cfg:2:", 0) == 0);
  CHECK(error_of("n = four\n").find("run.cfg:1:") == 0);
  CHECK(error_of("\n\ncolour = red\n").find("run.cfg:3:") == 0);
  CHECK(error_of("n = four\n").find("'n'") != std::string::npos);
  CHECK(error_of("alpha = -1\n").find("run.cfg:1:") == 0);
  CHECK(error_of("warm_start = maybe\n").find("warm_start") != std::string::npos);
  CHECK(error_of("penalty = cubic\n").find("run.cfg:1:") == 0);
  CHECK(error_of("n = 4\n# fine\n\nalpha = 0.1\n").empty());
}

TEST_CASE("validation rejects inconsistent configs") {
  ExperimentConfig cfg;
  cfg.problem = ProblemKind::Integer;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = ExperimentConfig{};
  cfg.target = "nope";
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = ExperimentConfig{};
  cfg.n = 1;
  CHECK_THROWS_AS(cfg.validate(), ParameterError);
  cfg = ExperimentConfig{};
  cfg.record_omega = true;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), UnsupportedError);
  CHECK_THROWS_AS((void)load_config_file("/nonexistent/run.cfg"), ConfigError);
}

TEST_CASE("solve summary and table text") {
  ExperimentConfig cfg = preset_config("example1");
  cfg.n = 4;
  const SolveSummary s = solve_experiment(cfg);
  const std::string json = summary_json(s);
  for (const char* key : {"\"J\"", "\"N_p\"", "\"pde_solves\"", "\"stationarity\"", "\"l_stat_residual\""})
    CHECK(json.find(key) != std::string::npos);

  std::ostringstream csv, txt;
  write_table_csv(csv, {s}, TableParam::MeshSize);
  write_table_text(txt, {s}, TableParam::MeshSize);
  CHECK(csv.str().find('\n') != std::string::npos);
  CHECK(!txt.str().empty());

  // same config, same bits
  const SolveSummary again = solve_experiment(cfg);
  CHECK(summary_json(again).size() == json.size());
  CHECK(again.J == s.J);
  CHECK((again.run.u.values.array() == s.run.u.values.array()).all());
}
