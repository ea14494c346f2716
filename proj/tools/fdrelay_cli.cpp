// Command-line front end: estimate, sweep, optimize-nc, validate-dt.

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "fdrelay/analytic.hpp"
#include "fdrelay/config.hpp"
#include "fdrelay/engine.hpp"
#include "fdrelay/report.hpp"

namespace {

using namespace fdrelay;

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInvalid = 2,
  kDegenerate = 3,
  kCheckFailed = 4,
  kIoError = 5,
};

struct Output {
  std::string path;

  std::string manifest_path() const { return path.empty() ? std::string{} : path + ".manifest.json"; }
};

void emit(const Output& out, const std::string& csv, RunManifest manifest) {
  manifest.finished = utc_timestamp();
  manifest.results_path = out.path;
  manifest.manifest_path = out.manifest_path();
  if (out.path.empty()) {
    std::cout << csv;
    return;
  }
  std::ofstream file(out.path);
  file << csv;
  if (!file) throw std::runtime_error("cannot write " + out.path);
  std::ofstream side(out.manifest_path());
  side << to_json(manifest).dump(2) << '\n';
  if (!side) throw std::runtime_error("cannot write " + out.manifest_path());
}

int budget_status(const SimulationConfig& config, const std::vector<OutageEstimate>& rows) {
  for (const auto& r : rows) {
    if (r.over_budget(config.degenerate_budget)) {
      std::cerr << fmt::format("degenerate trials over budget: {} {} of {}\n", to_string(r.protocol),
                               r.degenerate, r.trials + r.degenerate);
      return kDegenerate;
    }
  }
  return kOk;
}

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw ConfigError("values", "not a number: '" + item + "'");
    values.push_back(v);
  }
  if (values.empty()) throw ConfigError("values", "at least one value is required");
  return values;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Outage probability of full-duplex relaying protocols in a Poisson network"};
  app.require_subcommand(1);

  ConfigInputs inputs;
  Output out;
  std::string axis_name;
  std::string values_text;

  auto* estimate = app.add_subcommand("estimate", "Outage probability of each protocol");
  auto* sweep_cmd = app.add_subcommand("sweep", "Outage probability along one parameter axis");
  auto* optimize = app.add_subcommand("optimize-nc", "Outage probability across the n_c grid");
  auto* validate_dt =
      app.add_subcommand("validate-dt", "Direct transmission Monte Carlo against the closed form");
  for (auto* sub : {estimate, sweep_cmd, optimize, validate_dt}) {
    add_config_options(*sub, inputs);
    sub->add_option("--out,-o", out.path, "Results CSV path (stdout when omitted)");
  }
  sweep_cmd->add_option("--axis", axis_name, "lambda_ratio, power_ratio_db, epsilon, n_r or threshold")
      ->required();
  sweep_cmd->add_option("--values", values_text, "Comma-separated axis values")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ConversionError& e) {
    app.exit(e);
    return kInvalid;
  } catch (const CLI::ValidationError& e) {
    app.exit(e);
    return kInvalid;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsage;
  }

  try {
    SimulationConfig config = finalize(inputs);
    RunManifest manifest;
    manifest.config = config;
    manifest.started = utc_timestamp();

    if (estimate->parsed()) {
      manifest.subcommand = "estimate";
      const auto rows = estimate_op(config);
      std::ostringstream csv;
      write_csv(csv, rows);
      emit(out, csv.str(), manifest);
      return budget_status(config, rows);
    }

    if (sweep_cmd->parsed()) {
      manifest.subcommand = "sweep";
      const auto axis = parse_sweep_axis(axis_name);
      if (!axis) throw ConfigError("axis", "unknown axis '" + axis_name + "'");
      const auto values = parse_values(values_text);
      for (double v : values) validate(with_axis(config, *axis, v));
      const auto rows = sweep(config, *axis, values);
      manifest.extra = {{"axis", axis_name}, {"values", values}};
      std::ostringstream csv;
      write_csv(csv, rows);
      emit(out, csv.str(), manifest);
      return budget_status(config, rows);
    }

    if (optimize->parsed()) {
      manifest.subcommand = "optimize-nc";
      const auto grid = config.nc.values();
      const auto traces = optimize_nc(config, grid);
      if (traces.empty()) throw ConfigError("protocols", "optimize-nc needs nnc or mnnc");
      std::vector<OutageEstimate> rows;
      nlohmann::json chosen = nlohmann::json::object();
      for (const auto& t : traces) {
        for (auto r : t.grid) {
          r.axis = "nc";
          r.value = r.nc;
          rows.push_back(r);
        }
        auto best = t.grid[t.best];
        best.axis = "nc_best";
        best.value = best.nc;
        rows.push_back(best);
        chosen[std::string(to_string(t.protocol))] = {{"nc", *best.nc}, {"op", best.op}};
        std::cerr << fmt::format("{}: best n_c = {} (OP {} +/- {})\n", to_string(t.protocol), *best.nc,
                                 best.op, best.ci_half_width);
      }
      manifest.extra = {{"chosen", chosen}};
      std::ostringstream csv;
      write_csv(csv, rows);
      emit(out, csv.str(), manifest);
      return budget_status(config, rows);
    }

    // validate-dt
    manifest.subcommand = "validate-dt";
    config.protocols = {Protocol::dt};
    manifest.config = config;
    const auto rows = estimate_op(config);
    const auto& row = rows.front();
    const double analytic = dt_outage_closed_form(
        {config.lambda_s, config.rate, config.alpha, config.distance});
    const auto band = wilson_interval(row.outages, row.trials, 3.0);
    const bool inside = band.contains(analytic);
    std::cerr << fmt::format(
        "direct transmission: empirical {:.5f} (95% CI +/- {:.5f}, 3-sigma Wilson [{:.5f}, {:.5f}]) "
        "vs analytic {:.5f} over {} trials: {}\n",
        row.op, row.ci_half_width, band.lower(), band.upper(), analytic, row.trials,
        inside ? "PASS" : "FAIL");
    manifest.extra = {{"analytic", analytic}, {"empirical", row.op}, {"pass", inside}};
    std::ostringstream csv;
    write_csv(csv, rows);
    emit(out, csv.str(), manifest);
    if (const int status = budget_status(config, rows); status != kOk) return status;
    return inside ? kOk : kCheckFailed;
  } catch (const ConfigError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
}
