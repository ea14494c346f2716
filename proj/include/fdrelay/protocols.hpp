#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fdrelay/channel.hpp"
#include "fdrelay/gaussian_info.hpp"
#include "fdrelay/index_set.hpp"

namespace fdrelay {

enum class Protocol { dt, odf, nnc, mnnc };

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view name);

/// Protocols whose outage depends on the compression noise variance.
inline bool uses_compression(Protocol p) { return p == Protocol::nnc || p == Protocol::mnnc; }

enum class ThresholdMode { none, source_relay, relay_destination };

std::string_view to_string(ThresholdMode m);
std::optional<ThresholdMode> parse_threshold_mode(std::string_view name);

/// Interference-aware activation: a relay stays on only if the magnitude of
/// the selected link exceeds `threshold`.
struct ThresholdConfig {
  ThresholdMode mode = ThresholdMode::none;
  double threshold = 0.0;
};

/// Relays of one cluster allowed to transmit. Applies the same rule to the
/// typical cluster and to every interferer, each with its own links.
RelaySet activation_set(std::span<const cplx> source_to_relay, std::span<const cplx> relay_to_dest,
                        const ThresholdConfig& threshold);

/// Relays i in `active` with R < log2(1 + |g_{s,i}|^2 P_s / (I_{r_i} + sum over
/// other active m of |g_{m,i}|^2 P_r)). `relay_interference[i]` is I_{r_i}.
RelaySet decoding_set(double rate, const TypicalChannels& channels,
                      std::span<const double> relay_interference, RelaySet active, double p_source,
                      double p_relay);

/// Outage decisions on an assembled bundle. Rates at the boundary are outages.
bool dt_outage(double rate, const CovarianceBundle& bundle);
/// All transmitting relays of the bundle are decoders.
bool odf_outage(double rate, const CovarianceBundle& bundle);

/// The max-min rate over T subset of the compressors and S subset of T of
///   I(X_s, X_D, X_S; Yhat_{T\S}, Y_d | X_{T\S})
///     - I(Yhat_S; Y_S | X_s, X_D, X_T, Yhat_{T\S}, Y_d)
/// where D are the decoders. Both sets are positions within u; compressors
/// must be exactly the bundle's nnc positions. Exhaustive: no early exit.
double max_min_rate(const CovarianceBundle& bundle, RelaySet decoders);

/// R >= max_min_rate, evaluated with early exits: a T whose inner minimum
/// exceeds R proves success; an inner loop stops at the first S at or below R.
bool max_min_outage(double rate, const CovarianceBundle& bundle, RelaySet decoders);

inline bool nnc_outage(double rate, const CovarianceBundle& bundle) {
  return max_min_outage(rate, bundle, RelaySet{});
}
inline bool mnnc_outage(double rate, const CovarianceBundle& bundle, RelaySet decoders) {
  return max_min_outage(rate, bundle, decoders);
}

struct ProtocolConfig {
  std::vector<Protocol> protocols{Protocol::dt};
  double rate = 1.0;
  double p_source = 1.0;
  double p_relay = 0.1;
  ThresholdConfig threshold;
  double noise_floor = 0.0;
  /// Whether interferer relays transmit in the direct-transmission baseline.
  bool dt_interferer_relays = false;
};

enum class Verdict : std::uint8_t { success, outage, degenerate };

/// Relay sets chosen for the typical cluster on one realization.
struct ActivationState {
  RelaySet active;    // A_s
  RelaySet decoders;  // D
  std::vector<RelaySet> interferer_active;  // A_x (= B_x for every protocol)
};

struct TrialOutcome {
  /// No interfering transmitter and no noise floor: every rate is infinite.
  bool interference_free = false;
  /// verdicts[p][k]: protocol config.protocols[p] at nc_values[k]. Protocols
  /// without compression carry a single entry.
  std::vector<std::vector<Verdict>> verdicts;
};

/// A_s and every A_x; the decoding set is left empty.
ActivationState activate(const ProtocolConfig& config, const ChannelRealization& channels);

/// Activation, decoding set, interference, bundle assembly and outage
/// decision for every configured protocol on one realization.
TrialOutcome evaluate_trial(const ProtocolConfig& config, const ChannelRealization& channels,
                            std::span<const double> nc_values);

}  // namespace fdrelay
