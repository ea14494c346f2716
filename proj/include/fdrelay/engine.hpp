#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fdrelay/geometry.hpp"
#include "fdrelay/protocols.hpp"

namespace fdrelay {

/// Invalid configuration; `field()` names the offending setting.
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// Compression noise variances tried for NNC and MNNC. A fixed value, when
/// set, replaces the log-spaced grid.
struct NcGrid {
  double min = 1e-8;
  double max = 1e-2;
  std::size_t points = 25;
  std::optional<double> fixed;

  std::vector<double> values() const;
};

/// `points` log-spaced values from lo to hi inclusive.
std::vector<double> log_grid(double lo, double hi, std::size_t points);

struct SimulationConfig {
  double lambda_s = 1e-4;
  double lambda_ratio = 500.0;  // lambda_r / lambda_s
  double distance = 10.0;       // D
  double epsilon = 0.5;
  std::size_t n_r = 1;
  double p_source = 1.0;
  double power_ratio_db = -10.0;  // P_r / P_s
  double alpha = 4.0;
  double rate = 1.0;
  double window_radius = 1000.0;
  double noise_floor = 0.0;
  std::vector<Protocol> protocols{Protocol::dt};
  ThresholdConfig threshold;
  bool dt_interferer_relays = false;
  NcGrid nc;
  std::uint64_t trials = 100000;
  std::uint64_t base_seed = 1;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Largest tolerated fraction of numerically degenerate trials.
  double degenerate_budget = 1e-3;

  double lambda_r() const { return lambda_ratio * lambda_s; }
  double p_relay() const;
  NetworkParams network() const;
  ProtocolConfig protocol() const;
};

inline constexpr std::size_t kMaxRelays = 12;

/// Throws ConfigError naming the first invalid field.
void validate(const SimulationConfig& config);

/// Integer tallies over a batch of trials, indexed like TrialOutcome.
struct Tally {
  std::uint64_t trials = 0;
  std::uint64_t interference_free = 0;
  std::vector<std::vector<std::uint64_t>> outages;
  std::vector<std::vector<std::uint64_t>> degenerate;

  void add(const TrialOutcome& outcome);
  void merge(const Tally& other);
};

/// Realization and verdicts of trial `seed`; a pure function of its inputs.
TrialOutcome run_trial(const SimulationConfig& config, std::uint64_t seed,
                       std::span<const double> nc_values);

/// Trials base_seed .. base_seed + trials - 1, spread over config.threads
/// workers. Counts do not depend on the schedule.
Tally run_batch(const SimulationConfig& config, std::span<const double> nc_values);

struct WilsonInterval {
  double center = 0.0;
  double half_width = 0.0;
  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
  bool contains(double p) const { return p >= lower() && p <= upper(); }
};

/// Wilson score interval for k successes out of n at normal quantile z.
WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z = 1.96);

struct OutageEstimate {
  Protocol protocol = Protocol::dt;
  std::string axis = "none";
  std::optional<double> value;
  std::size_t n_r = 0;
  double power_ratio_db = 0.0;
  double epsilon = 0.0;
  std::optional<double> nc;
  std::uint64_t trials = 0;  // non-degenerate trials
  std::uint64_t outages = 0;
  double op = 0.0;
  double ci_half_width = 0.0;  // 95 % Wilson
  std::uint64_t degenerate = 0;
  std::uint64_t interference_free = 0;

  /// Degenerate trials exceed `budget` as a fraction of all trials.
  bool over_budget(double budget) const;
};

/// One estimate per configured protocol. NNC and MNNC report the grid point
/// with the lowest outage frequency (ties go to the smaller n_c).
std::vector<OutageEstimate> estimate_op(const SimulationConfig& config);

struct NcTrace {
  Protocol protocol = Protocol::nnc;
  std::vector<OutageEstimate> grid;  // one row per grid value, in grid order
  std::size_t best = 0;
};

/// Outage estimates across `grid` with common random numbers for every
/// configured protocol that compresses.
std::vector<NcTrace> optimize_nc(const SimulationConfig& config, std::span<const double> grid);

enum class SweepAxis { lambda_ratio, power_ratio_db, epsilon, n_r, threshold };

std::string_view to_string(SweepAxis axis);
std::optional<SweepAxis> parse_sweep_axis(std::string_view name);

/// `config` with the swept field set to `value`.
SimulationConfig with_axis(SimulationConfig config, SweepAxis axis, double value);

/// Rows ordered by value, then protocol. Every value reuses the same seeds.
std::vector<OutageEstimate> sweep(const SimulationConfig& config, SweepAxis axis,
                                  std::span<const double> values);

}  // namespace fdrelay
