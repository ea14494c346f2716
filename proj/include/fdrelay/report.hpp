#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fdrelay/engine.hpp"

namespace fdrelay {

inline constexpr std::string_view kCsvHeader =
    "protocol,axis,value,n_r,power_ratio_db,epsilon,nc,trials,outages,op,ci_halfwidth,degenerate";

/// One CSV line (no trailing newline). Numbers use the shortest round-trip
/// representation with a '.' decimal point regardless of locale; absent
/// optional fields are left empty.
std::string csv_row(const OutageEstimate& e);

/// Header plus one line per estimate.
void write_csv(std::ostream& out, std::span<const OutageEstimate> rows);

/// Sidecar metadata of a run: configuration snapshot, version, timestamps,
/// seed plan and output paths.
struct RunManifest {
  std::string subcommand;
  SimulationConfig config;
  std::string started;
  std::string finished;
  std::string results_path;
  std::string manifest_path;
  nlohmann::json extra = nlohmann::json::object();
};

nlohmann::json to_json(const RunManifest& m);

/// ISO-8601 UTC timestamp of the current time.
std::string utc_timestamp();

}  // namespace fdrelay
