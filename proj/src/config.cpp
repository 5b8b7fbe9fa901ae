#include "proxgrad/config.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <string>

namespace proxgrad {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view v) {
  if (v == "inf" || v == "infinity") return kInf;
  // std::from_chars for double is missing on older toolchains.
  const std::string text(v);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size())
    throw ConfigError("field '" + std::string(key) + "': expected a number, got '" + text + "'");
  return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view v) {
  Int out{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size())
    throw ConfigError("field '" + std::string(key) + "': expected an integer, got '" +
                      std::string(v) + "'");
  return out;
}

bool to_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("field '" + std::string(key) + "': expected a boolean, got '" + std::string(v) + "'");
}

// Range checks that do not depend on other fields.
double in_range(std::string_view key, double x, double lo, bool lo_open, double hi, bool hi_open) {
  const bool ok = (lo_open ? x > lo : x >= lo) && (hi_open ? x < hi : x <= hi);
  if (!ok)
    throw ConfigError("field '" + std::string(key) + "': value " + std::to_string(x) + " out of range");
  return x;
}

double positive(std::string_view key, double x) { return in_range(key, x, 0.0, true, kInf, false); }
double non_negative(std::string_view key, double x) { return in_range(key, x, 0.0, false, kInf, true); }

}  // namespace

void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
  const std::string_view v = trim(value);
  if (key == "preset") {
    const std::string out_dir = cfg.output_dir;
    cfg = preset_config(v);
    cfg.output_dir = out_dir;
  } else if (key == "problem") {
    cfg.problem = parse_problem_kind(v);
    if (cfg.problem == ProblemKind::Integer) cfg.penalty = PenaltyKind::IntegerIndicator;
  } else if (key == "penalty") {
    cfg.penalty = parse_penalty_kind(v);
  } else if (key == "n") {
    cfg.n = to_int<int>(key, v);
    if (cfg.n < 2) throw ConfigError("field 'n': must be >= 2");
  } else if (key == "alpha") {
    cfg.alpha = non_negative(key, to_double(key, v));
  } else if (key == "beta") {
    cfg.beta = non_negative(key, to_double(key, v));
  } else if (key == "p") {
    cfg.p = in_range(key, to_double(key, v), 0.0, true, 1.0, true);
  } else if (key == "b") {
    cfg.b = positive(key, to_double(key, v));
  } else if (key == "log_slope") {
    cfg.log_slope = positive(key, to_double(key, v));
  } else if (key == "mode") {
    if (v == "backtracking") cfg.mode = StepMode::Backtracking;
    else if (v == "fixed") cfg.mode = StepMode::FixedL;
    else throw ConfigError("field 'mode': expected 'backtracking' or 'fixed', got '" + std::string(v) + "'");
  } else if (key == "L0" || key == "L") {
    cfg.L0 = in_range(key, to_double(key, v), 0.0, true, kInf, true);
  } else if (key == "theta") {
    cfg.theta = in_range(key, to_double(key, v), 0.0, true, 1.0, true);
  } else if (key == "eta") {
    cfg.eta = positive(key, to_double(key, v));
  } else if (key == "stop_tol") {
    cfg.stop_tol = positive(key, to_double(key, v));
  } else if (key == "max_iter") {
    cfg.max_iter = to_int<int>(key, v);
    if (cfg.max_iter < 1) throw ConfigError("field 'max_iter': must be >= 1");
  } else if (key == "max_backtracks") {
    cfg.max_backtracks = to_int<int>(key, v);
    if (cfg.max_backtracks < 0) throw ConfigError("field 'max_backtracks': must be >= 0");
  } else if (key == "warm_start") {
    cfg.warm_start = to_bool(key, v);
  } else if (key == "record_omega") {
    cfg.record_omega = to_bool(key, v);
  } else if (key == "target") {
    cfg.target = std::string(v);
  } else if (key == "output_dir") {
    cfg.output_dir = std::string(v);
  } else if (key == "seed") {
    cfg.seed = to_int<std::uint64_t>(key, v);
  } else if (key == "backend") {
    if (v == "cg") cfg.backend = LinearBackend::ConjugateGradient;
    else if (v == "cholesky") cfg.backend = LinearBackend::Cholesky;
    else throw ConfigError("field 'backend': expected 'cg' or 'cholesky', got '" + std::string(v) + "'");
  } else {
    throw ConfigError("unknown field '" + std::string(key) + "'");
  }
}

ExperimentConfig parse_config(std::istream& in, std::string_view source, ExperimentConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto where = std::string(source) + ":" + std::to_string(line_no) + ": ";
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value'");
    const auto key = trim(text.substr(0, eq));
    if (key.empty()) throw ConfigError(where + "missing key before '='");
    try {
      apply_setting(base, key, text.substr(eq + 1));
    } catch (const ParameterError& e) {
      throw ConfigError(where + e.what());
    }
  }
  // cross-field consistency (problem vs penalty, known target, ...)
  try {
    base.validate();
  } catch (const ParameterError& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path, std::move(base));
}

}  // namespace proxgrad
