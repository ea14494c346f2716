#include "fdrelay/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "fdrelay/channel.hpp"
#include "fdrelay/random.hpp"

namespace fdrelay {

namespace {

constexpr std::uint64_t kChunk = 64;

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ConfigError(field, message);
}

unsigned worker_count(const SimulationConfig& config) {
  unsigned n = config.threads;
  if (n == 0) n = std::max(1U, std::thread::hardware_concurrency());
  return n;
}

std::vector<double> nc_values_for(const SimulationConfig& config) {
  const bool any = std::any_of(config.protocols.begin(), config.protocols.end(), uses_compression);
  if (!any) return {};
  return config.nc.values();
}

OutageEstimate make_row(const SimulationConfig& config, Protocol protocol, const Tally& tally,
                        std::size_t p, std::size_t k, std::optional<double> nc) {
  OutageEstimate e;
  e.protocol = protocol;
  e.n_r = config.n_r;
  e.power_ratio_db = config.power_ratio_db;
  e.epsilon = config.epsilon;
  e.nc = nc;
  e.degenerate = tally.degenerate[p][k];
  e.trials = tally.trials - e.degenerate;
  e.outages = tally.outages[p][k];
  e.op = e.trials > 0 ? static_cast<double>(e.outages) / static_cast<double>(e.trials) : 0.0;
  e.ci_half_width = wilson_interval(e.outages, e.trials).half_width;
  e.interference_free = tally.interference_free;
  return e;
}

// Index of the smallest outage frequency; the first wins ties.
std::size_t argmin_op(const std::vector<OutageEstimate>& rows) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    // Cross-multiplied to compare k1/n1 < k2/n2 exactly.
    const auto lhs = static_cast<long double>(rows[k].outages) * rows[best].trials;
    const auto rhs = static_cast<long double>(rows[best].outages) * rows[k].trials;
    if (lhs < rhs) best = k;
  }
  return best;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
  if (points == 0) return {};
  if (points == 1) return {lo};
  std::vector<double> out(points);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> NcGrid::values() const {
  if (fixed) return {*fixed};
  return log_grid(min, max, points);
}

double SimulationConfig::p_relay() const { return p_source * std::pow(10.0, power_ratio_db / 10.0); }

NetworkParams SimulationConfig::network() const {
  NetworkParams n;
  n.lambda_s = lambda_s;
  n.distance = distance;
  n.epsilon = epsilon;
  n.n_r = n_r;
  n.lambda_r = lambda_r();
  n.window_radius = window_radius;
  return n;
}

ProtocolConfig SimulationConfig::protocol() const {
  ProtocolConfig p;
  p.protocols = protocols;
  p.rate = rate;
  p.p_source = p_source;
  p.p_relay = p_relay();
  p.threshold = threshold;
  p.noise_floor = noise_floor;
  p.dt_interferer_relays = dt_interferer_relays;
  return p;
}

void validate(const SimulationConfig& c) {
  require(c.lambda_s > 0.0 && std::isfinite(c.lambda_s), "lambda_s", "must be positive");
  require(c.lambda_ratio > 0.0 && std::isfinite(c.lambda_ratio), "lambda_ratio", "must be positive");
  require(c.distance > 0.0 && std::isfinite(c.distance), "distance", "must be positive");
  require(c.epsilon >= 0.0 && c.epsilon <= 1.0, "epsilon", "must lie in [0, 1]");
  require(c.n_r <= kMaxRelays, "n_r", "at most " + std::to_string(kMaxRelays) + " relays are supported");
  require(c.p_source > 0.0 && std::isfinite(c.p_source), "p_source", "must be positive");
  require(std::isfinite(c.power_ratio_db), "power_ratio_db", "must be finite");
  require(c.alpha > 2.0 && std::isfinite(c.alpha), "alpha",
          "must exceed 2 (the interference constant diverges otherwise)");
  require(c.rate >= 0.0 && std::isfinite(c.rate), "rate", "must be non-negative");
  require(c.window_radius >= 0.0 && std::isfinite(c.window_radius), "window_radius",
          "must be non-negative");
  require(c.noise_floor >= 0.0 && std::isfinite(c.noise_floor), "noise_floor", "must be non-negative");
  require(!c.protocols.empty(), "protocols", "at least one protocol is required");
  require(c.threshold.threshold >= 0.0, "threshold", "must be non-negative");
  if (c.nc.fixed) {
    require(*c.nc.fixed > 0.0 && std::isfinite(*c.nc.fixed), "nc", "must be positive");
  } else {
    require(c.nc.min > 0.0 && std::isfinite(c.nc.min), "nc_min", "must be positive");
    require(c.nc.max >= c.nc.min && std::isfinite(c.nc.max), "nc_max", "must be at least nc_min");
    require(c.nc.points >= 1, "nc_points", "must be at least 1");
  }
  require(c.trials >= 1, "trials", "must be at least 1");
  require(c.degenerate_budget >= 0.0 && c.degenerate_budget <= 1.0, "degenerate_budget",
          "must lie in [0, 1]");
}

void Tally::add(const TrialOutcome& outcome) {
  if (outages.empty()) {
    outages.resize(outcome.verdicts.size());
    degenerate.resize(outcome.verdicts.size());
    for (std::size_t p = 0; p < outcome.verdicts.size(); ++p) {
      outages[p].assign(outcome.verdicts[p].size(), 0);
      degenerate[p].assign(outcome.verdicts[p].size(), 0);
    }
  }
  ++trials;
  if (outcome.interference_free) ++interference_free;
  for (std::size_t p = 0; p < outcome.verdicts.size(); ++p) {
    for (std::size_t k = 0; k < outcome.verdicts[p].size(); ++k) {
      const Verdict v = outcome.verdicts[p][k];
      if (v == Verdict::outage) ++outages[p][k];
      if (v == Verdict::degenerate) ++degenerate[p][k];
    }
  }
}

void Tally::merge(const Tally& other) {
  if (other.trials == 0) return;
  if (trials == 0) {
    *this = other;
    return;
  }
  trials += other.trials;
  interference_free += other.interference_free;
  for (std::size_t p = 0; p < outages.size(); ++p) {
    for (std::size_t k = 0; k < outages[p].size(); ++k) {
      outages[p][k] += other.outages[p][k];
      degenerate[p][k] += other.degenerate[p][k];
    }
  }
}

TrialOutcome run_trial(const SimulationConfig& config, std::uint64_t seed,
                       std::span<const double> nc_values) {
  Rng sources = make_stream(seed, Stream::sources);
  Rng relays = make_stream(seed, Stream::relays);
  Rng typical = make_stream(seed, Stream::typical_fading);
  Rng interferer = make_stream(seed, Stream::interferer_fading);
  Rng internal = make_stream(seed, Stream::internal_fading);

  const NetworkGeometry geometry = sample_network(config.network(), sources, relays);
  const bool internal_links = config.threshold.mode != ThresholdMode::none;
  const ChannelRealization channels =
      realize_channels(geometry, config.alpha, internal_links, {typical, interferer, internal});
  return evaluate_trial(config.protocol(), channels, nc_values);
}

Tally run_batch(const SimulationConfig& config, std::span<const double> nc_values) {
  validate(config);
  const std::uint64_t chunks = (config.trials + kChunk - 1) / kChunk;
  const unsigned workers = static_cast<unsigned>(
      std::min<std::uint64_t>(worker_count(config), std::max<std::uint64_t>(chunks, 1)));

  std::atomic<std::uint64_t> next{0};
  std::vector<Tally> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (std::uint64_t c = next++; c < chunks; c = next++) {
        const std::uint64_t end = std::min(config.trials, (c + 1) * kChunk);
        for (std::uint64_t i = c * kChunk; i < end; ++i) {
          partial[w].add(run_trial(config, trial_seed(config.base_seed, i), nc_values));
        }
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Tally total;
  for (const auto& t : partial) total.merge(t);
  return total;
}

WilsonInterval wilson_interval(std::uint64_t k, std::uint64_t n, double z) {
  if (n == 0) return {0.5, 0.5};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {center, half};
}

bool OutageEstimate::over_budget(double budget) const {
  const std::uint64_t total = trials + degenerate;
  return total > 0 && static_cast<double>(degenerate) > budget * static_cast<double>(total);
}

std::vector<OutageEstimate> estimate_op(const SimulationConfig& config) {
  const auto nc = nc_values_for(config);
  const Tally tally = run_batch(config, nc);
  std::vector<OutageEstimate> rows;
  for (std::size_t p = 0; p < config.protocols.size(); ++p) {
    const Protocol protocol = config.protocols[p];
    if (!uses_compression(protocol)) {
      rows.push_back(make_row(config, protocol, tally, p, 0, std::nullopt));
      continue;
    }
    std::vector<OutageEstimate> grid;
    for (std::size_t k = 0; k < nc.size(); ++k) {
      grid.push_back(make_row(config, protocol, tally, p, k, nc[k]));
    }
    rows.push_back(grid[argmin_op(grid)]);
  }
  return rows;
}

std::vector<NcTrace> optimize_nc(const SimulationConfig& config, std::span<const double> grid) {
  if (grid.empty()) throw ConfigError("nc", "the n_c grid is empty");
  for (double v : grid) {
    if (!(v > 0.0)) throw ConfigError("nc", "grid values must be positive");
  }
  const Tally tally = run_batch(config, grid);
  std::vector<NcTrace> out;
  for (std::size_t p = 0; p < config.protocols.size(); ++p) {
    if (!uses_compression(config.protocols[p])) continue;
    NcTrace trace;
    trace.protocol = config.protocols[p];
    for (std::size_t k = 0; k < grid.size(); ++k) {
      trace.grid.push_back(make_row(config, trace.protocol, tally, p, k, grid[k]));
    }
    trace.best = argmin_op(trace.grid);
    out.push_back(std::move(trace));
  }
  return out;
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::lambda_ratio: return "lambda_ratio";
    case SweepAxis::power_ratio_db: return "power_ratio_db";
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::n_r: return "n_r";
    case SweepAxis::threshold: return "threshold";
  }
  return "?";
}

std::optional<SweepAxis> parse_sweep_axis(std::string_view name) {
  for (auto a : {SweepAxis::lambda_ratio, SweepAxis::power_ratio_db, SweepAxis::epsilon,
                 SweepAxis::n_r, SweepAxis::threshold}) {
    if (name == to_string(a)) return a;
  }
  return std::nullopt;
}

SimulationConfig with_axis(SimulationConfig config, SweepAxis axis, double value) {
  switch (axis) {
    case SweepAxis::lambda_ratio: config.lambda_ratio = value; break;
    case SweepAxis::power_ratio_db: config.power_ratio_db = value; break;
    case SweepAxis::epsilon: config.epsilon = value; break;
    case SweepAxis::n_r:
      if (!(value >= 0.0) || value != std::floor(value)) {
        throw ConfigError("n_r", "sweep values must be non-negative integers");
      }
      config.n_r = static_cast<std::size_t>(value);
      break;
    case SweepAxis::threshold: config.threshold.threshold = value; break;
  }
  return config;
}

std::vector<OutageEstimate> sweep(const SimulationConfig& config, SweepAxis axis,
                                  std::span<const double> values) {
  if (values.empty()) throw ConfigError("values", "a sweep needs at least one value");
  std::vector<OutageEstimate> rows;
  for (double v : values) {
    for (auto row : estimate_op(with_axis(config, axis, v))) {
      row.axis = std::string(to_string(axis));
      row.value = v;
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace fdrelay
