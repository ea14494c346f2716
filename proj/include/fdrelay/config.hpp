#pragma once

#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fdrelay/engine.hpp"

namespace fdrelay {

/// Raw option values as typed on the command line or in a config file, before
/// they are folded into a SimulationConfig.
struct ConfigInputs {
  SimulationConfig config;
  std::vector<std::string> protocols{"dt"};
  std::string threshold_mode = "none";
  double lambda_r = 0.0;  // absolute relay density; overrides lambda_ratio when > 0
  double p_relay = 0.0;   // absolute relay power; overrides power_ratio_db when > 0
  double nc = 0.0;        // fixed compression noise; grid when 0
  std::string manifest;   // load the config snapshot of an earlier run
};

/// Registers one option per SimulationConfig field (flag names mirror the
/// field names) plus `--config <file>` for key = value files.
void add_config_options(CLI::App& app, ConfigInputs& inputs);

/// Folds string-valued options and absolute overrides into the config and
/// validates it. Throws ConfigError.
SimulationConfig finalize(const ConfigInputs& inputs);

/// Parses flags (argv without the program name). Throws CLI::ParseError for
/// malformed input and ConfigError for invalid values.
SimulationConfig parse_config(const std::vector<std::string>& args);

nlohmann::json to_json(const SimulationConfig& config);
/// Missing keys keep their defaults. Throws ConfigError on bad values.
SimulationConfig config_from_json(const nlohmann::json& j);

}  // namespace fdrelay
