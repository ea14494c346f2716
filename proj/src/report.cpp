#include "fdrelay/report.hpp"

#include <chrono>
#include <ctime>
#include <ostream>

#include <fmt/format.h>

#include "fdrelay/config.hpp"

namespace fdrelay {

namespace {

std::string number(double v) { return fmt::format("{}", v); }

std::string optional_number(const std::optional<double>& v) { return v ? number(*v) : std::string{}; }

}  // namespace

std::string csv_row(const OutageEstimate& e) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}", to_string(e.protocol), e.axis,
                     optional_number(e.value), e.n_r, number(e.power_ratio_db), number(e.epsilon),
                     optional_number(e.nc), e.trials, e.outages, number(e.op),
                     number(e.ci_half_width), e.degenerate);
}

void write_csv(std::ostream& out, std::span<const OutageEstimate> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) out << csv_row(r) << '\n';
}

nlohmann::json to_json(const RunManifest& m) {
  return {
      {"artifact", "fdrelay"},
      {"version", FDRELAY_VERSION},
      {"subcommand", m.subcommand},
      {"config", to_json(m.config)},
      {"seed_plan",
       {{"base_seed", m.config.base_seed},
        {"trials", m.config.trials},
        {"scheme", "trial k uses seed base_seed + k; independent substreams per stage"}}},
      {"started", m.started},
      {"finished", m.finished},
      {"results", m.results_path},
      {"manifest", m.manifest_path},
      {"summary", m.extra},
  };
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace fdrelay
