#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "proxgrad/errors.hpp"
#include "proxgrad/experiments.hpp"

namespace proxgrad {

/// Malformed configuration input. The message carries the source and line.
class ConfigError : public ParameterError {
 public:
  using ParameterError::ParameterError;
};

/// Sets one field from its textual value. Keys: preset, problem, penalty, n,
/// alpha, beta, p, b, log_slope, mode, L0, theta, eta, stop_tol, max_iter, max_backtracks,
/// warm_start, record_omega, target, output_dir, seed, backend.
/// `preset` replaces the whole config with the named preset.
void apply_setting(ExperimentConfig& cfg, std::string_view key, std::string_view value);

/// Flat "key = value" file; '#' starts a comment, blank lines are ignored.
/// Settings apply in order on top of `base`.
[[nodiscard]] ExperimentConfig parse_config(std::istream& in, std::string_view source,
                                            ExperimentConfig base = {});
[[nodiscard]] ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

}  // namespace proxgrad
