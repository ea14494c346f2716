#include "fdrelay/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fdrelay {

namespace {

std::vector<Protocol> parse_protocols(const std::vector<std::string>& names) {
  std::vector<Protocol> out;
  for (const auto& name : names) {
    const auto p = parse_protocol(name);
    if (!p) throw ConfigError("protocols", "unknown protocol '" + name + "' (dt, odf, nnc, mnnc)");
    if (std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
  }
  return out;
}

template <class T>
void read(const nlohmann::json& j, const char* key, T& field) {
  if (!j.contains(key) || j.at(key).is_null()) return;
  try {
    field = j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

}  // namespace

void add_config_options(CLI::App& app, ConfigInputs& in) {
  auto& c = in.config;
  app.set_config("--config", "", "Read options from a key = value file");
  app.add_option("--lambda_s", c.lambda_s, "Source density per unit area")->capture_default_str();
  app.add_option("--lambda_ratio", c.lambda_ratio, "Relay-to-source density ratio")->capture_default_str();
  app.add_option("--lambda_r", in.lambda_r, "Absolute relay density (overrides lambda_ratio)");
  app.add_option("--distance,-D", c.distance, "Source-destination distance")->capture_default_str();
  app.add_option("--epsilon", c.epsilon, "Relay centre position on the source-destination line")
      ->capture_default_str();
  app.add_option("--n_r", c.n_r, "Potential relays per cluster")->capture_default_str();
  app.add_option("--p_source", c.p_source, "Source transmit power")->capture_default_str();
  app.add_option("--power_ratio_db", c.power_ratio_db, "Relay-to-source power ratio in dB")
      ->capture_default_str();
  app.add_option("--p_relay", in.p_relay, "Absolute relay power (overrides power_ratio_db)");
  app.add_option("--alpha", c.alpha, "Path loss exponent")->capture_default_str();
  app.add_option("--rate,-R", c.rate, "Attempted rate in bits per channel use")->capture_default_str();
  app.add_option("--window_radius", c.window_radius, "Radius of the simulated disc")
      ->capture_default_str();
  app.add_option("--noise_floor", c.noise_floor, "Receiver noise power added to the interference")
      ->capture_default_str();
  app.add_option("--protocols", in.protocols, "Comma-separated subset of dt,odf,nnc,mnnc")
      ->delimiter(',')
      ->capture_default_str();
  app.add_option("--threshold_mode", in.threshold_mode, "none, source_relay or relay_destination")
      ->capture_default_str();
  app.add_option("--threshold", c.threshold.threshold, "Activation threshold on |g|")
      ->capture_default_str();
  app.add_option("--dt_interferer_relays", c.dt_interferer_relays,
                 "Interferer relays transmit in the direct-transmission baseline")
      ->capture_default_str();
  app.add_option("--nc", in.nc, "Fixed compression noise variance (disables the grid)");
  app.add_option("--nc_min", c.nc.min, "Lowest n_c of the grid")->capture_default_str();
  app.add_option("--nc_max", c.nc.max, "Highest n_c of the grid")->capture_default_str();
  app.add_option("--nc_points", c.nc.points, "Log-spaced n_c grid points")->capture_default_str();
  app.add_option("--trials", c.trials, "Monte Carlo trials")->capture_default_str();
  app.add_option("--seed,--base_seed", c.base_seed, "Seed of trial 0")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker threads (0: all cores)")->capture_default_str();
  app.add_option("--degenerate_budget", c.degenerate_budget,
                 "Tolerated fraction of numerically degenerate trials")
      ->capture_default_str();
  app.add_option("--from_manifest", in.manifest, "Reuse the configuration of an earlier run");
}

SimulationConfig finalize(const ConfigInputs& in) {
  if (!in.manifest.empty()) {
    std::ifstream file(in.manifest);
    if (!file) throw ConfigError("from_manifest", "cannot open " + in.manifest);
    nlohmann::json j;
    try {
      file >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("from_manifest", e.what());
    }
    if (!j.contains("config")) throw ConfigError("from_manifest", "no config snapshot");
    SimulationConfig c = config_from_json(j.at("config"));
    if (in.config.threads != 0) c.threads = in.config.threads;
    validate(c);
    return c;
  }

  SimulationConfig c = in.config;
  c.protocols = parse_protocols(in.protocols);
  const auto mode = parse_threshold_mode(in.threshold_mode);
  if (!mode) throw ConfigError("threshold_mode", "unknown mode '" + in.threshold_mode + "'");
  c.threshold.mode = *mode;
  if (in.lambda_r < 0.0) throw ConfigError("lambda_r", "must be positive");
  if (in.lambda_r > 0.0) c.lambda_ratio = in.lambda_r / c.lambda_s;
  if (in.p_relay < 0.0) throw ConfigError("p_relay", "must be positive");
  if (in.p_relay > 0.0) c.power_ratio_db = 10.0 * std::log10(in.p_relay / c.p_source);
  if (in.nc < 0.0) throw ConfigError("nc", "must be positive");
  if (in.nc > 0.0) c.nc.fixed = in.nc;
  validate(c);
  return c;
}

SimulationConfig parse_config(const std::vector<std::string>& args) {
  CLI::App app{"fdrelay configuration"};
  ConfigInputs in;
  add_config_options(app, in);
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  app.parse(reversed);
  return finalize(in);
}

nlohmann::json to_json(const SimulationConfig& c) {
  nlohmann::json protocols = nlohmann::json::array();
  for (auto p : c.protocols) protocols.push_back(std::string(to_string(p)));
  return {
      {"lambda_s", c.lambda_s},
      {"lambda_ratio", c.lambda_ratio},
      {"distance", c.distance},
      {"epsilon", c.epsilon},
      {"n_r", c.n_r},
      {"p_source", c.p_source},
      {"power_ratio_db", c.power_ratio_db},
      {"alpha", c.alpha},
      {"rate", c.rate},
      {"window_radius", c.window_radius},
      {"noise_floor", c.noise_floor},
      {"protocols", protocols},
      {"threshold_mode", std::string(to_string(c.threshold.mode))},
      {"threshold", c.threshold.threshold},
      {"dt_interferer_relays", c.dt_interferer_relays},
      {"nc", c.nc.fixed ? nlohmann::json(*c.nc.fixed) : nlohmann::json(nullptr)},
      {"nc_min", c.nc.min},
      {"nc_max", c.nc.max},
      {"nc_points", c.nc.points},
      {"trials", c.trials},
      {"seed", c.base_seed},
      {"threads", c.threads},
      {"degenerate_budget", c.degenerate_budget},
  };
}

SimulationConfig config_from_json(const nlohmann::json& j) {
  SimulationConfig c;
  read(j, "lambda_s", c.lambda_s);
  read(j, "lambda_ratio", c.lambda_ratio);
  read(j, "distance", c.distance);
  read(j, "epsilon", c.epsilon);
  read(j, "n_r", c.n_r);
  read(j, "p_source", c.p_source);
  read(j, "power_ratio_db", c.power_ratio_db);
  read(j, "alpha", c.alpha);
  read(j, "rate", c.rate);
  read(j, "window_radius", c.window_radius);
  read(j, "noise_floor", c.noise_floor);
  std::vector<std::string> protocols;
  read(j, "protocols", protocols);
  if (!protocols.empty()) c.protocols = parse_protocols(protocols);
  std::string mode = "none";
  read(j, "threshold_mode", mode);
  const auto m = parse_threshold_mode(mode);
  if (!m) throw ConfigError("threshold_mode", "unknown mode '" + mode + "'");
  c.threshold.mode = *m;
  read(j, "threshold", c.threshold.threshold);
  read(j, "dt_interferer_relays", c.dt_interferer_relays);
  if (j.contains("nc") && !j.at("nc").is_null()) {
    double nc = 0.0;
    read(j, "nc", nc);
    c.nc.fixed = nc;
  }
  read(j, "nc_min", c.nc.min);
  read(j, "nc_max", c.nc.max);
  read(j, "nc_points", c.nc.points);
  read(j, "trials", c.trials);
  read(j, "seed", c.base_seed);
  read(j, "threads", c.threads);
  read(j, "degenerate_budget", c.degenerate_budget);
  return c;
}

}  // namespace fdrelay
