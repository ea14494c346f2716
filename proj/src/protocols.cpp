#include "fdrelay/protocols.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdrelay/interference.hpp"

namespace fdrelay {

namespace {

// Variable sets of a bundle for relay positions within u.
struct BundleVars {
  const CovarianceBundle& b;

  VarSet x(RelaySet positions) const {
    VarSet s;
    for (auto p : positions.indices()) s.insert(b.x_relay(p));
    return s;
  }
  VarSet y(RelaySet positions) const {
    VarSet s;
    for (auto p : positions.indices()) s.insert(b.y_relay(p));
    return s;
  }
  VarSet y_hat(RelaySet positions) const {
    VarSet s;
    for (std::size_t j = 0; j < b.n_nnc; ++j) {
      if (positions.contains(b.nnc_positions[j])) s.insert(b.y_hat(j));
    }
    return s;
  }
  VarSet single(std::size_t i) const { return VarSet{i}; }
};

RelaySet compressor_set(const CovarianceBundle& b) {
  RelaySet c;
  for (auto t : b.nnc_positions) c.insert(t);
  return c;
}

// Inner term of the max-min rate for one (T, S).
double cut_rate(InfoEvaluator& info, const BundleVars& v, RelaySet decoders, RelaySet t,
                RelaySet s) {
  const RelaySet sc = t - s;
  const VarSet xs = v.single(v.b.x_source());
  const VarSet yd = v.single(v.b.y_dest());
  const double gain = info.conditional_mutual_info(xs | v.x(decoders) | v.x(s), v.y_hat(sc) | yd,
                                                   v.x(sc));
  if (s.empty()) {
    return gain;
  }
  const double penalty = info.conditional_mutual_info(
      v.y_hat(s), v.y(s), xs | v.x(decoders) | v.x(t) | v.y_hat(sc) | yd);
  return gain - penalty;
}

void check_decoders(const CovarianceBundle& b, RelaySet decoders) {
  if (!decoders.is_subset_of(RelaySet::all(b.n_a))) {
    throw std::out_of_range("decoder position beyond the transmitting relays");
  }
  if (!decoders.disjoint(compressor_set(b))) {
    throw std::invalid_argument("a relay cannot both decode and compress");
  }
}

// Enumerates the submasks of `set`, starting from the empty set.
template <class F>
bool any_subset(RelaySet set, F&& f) {
  const std::uint32_t full = set.bits();
  std::uint32_t sub = 0;
  while (true) {
    if (f(RelaySet(sub))) return true;
    if (sub == full) return false;
    sub = (sub - full) & full;
  }
}

}  // namespace

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::dt: return "dt";
    case Protocol::odf: return "odf";
    case Protocol::nnc: return "nnc";
    case Protocol::mnnc: return "mnnc";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view name) {
  for (auto p : {Protocol::dt, Protocol::odf, Protocol::nnc, Protocol::mnnc}) {
    if (name == to_string(p)) return p;
  }
  return std::nullopt;
}

std::string_view to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::none: return "none";
    case ThresholdMode::source_relay: return "source_relay";
    case ThresholdMode::relay_destination: return "relay_destination";
  }
  return "?";
}

std::optional<ThresholdMode> parse_threshold_mode(std::string_view name) {
  for (auto m : {ThresholdMode::none, ThresholdMode::source_relay, ThresholdMode::relay_destination}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

RelaySet activation_set(std::span<const cplx> source_to_relay, std::span<const cplx> relay_to_dest,
                        const ThresholdConfig& threshold) {
  const std::size_t n_r = std::max(source_to_relay.size(), relay_to_dest.size());
  if (threshold.mode == ThresholdMode::none) {
    return RelaySet::all(n_r);
  }
  const auto links = threshold.mode == ThresholdMode::source_relay ? source_to_relay : relay_to_dest;
  if (links.size() != n_r) {
    throw std::invalid_argument("threshold activation needs the selected links of every relay");
  }
  RelaySet out;
  for (std::size_t i = 0; i < links.size(); ++i) {
    if (std::abs(links[i]) > threshold.threshold) out.insert(i);
  }
  return out;
}

RelaySet decoding_set(double rate, const TypicalChannels& channels,
                      std::span<const double> relay_interference, RelaySet active, double p_source,
                      double p_relay) {
  RelaySet out;
  for (auto i : active.indices()) {
    double noise = relay_interference[i];
    for (auto m : active.indices()) {
      if (m != i) {
        noise += std::norm(channels.relay_to_relay(static_cast<Eigen::Index>(m),
                                                   static_cast<Eigen::Index>(i))) *
                 p_relay;
      }
    }
    const double signal = std::norm(channels.source_to_relay(static_cast<Eigen::Index>(i))) * p_source;
    const double capacity = noise > 0.0 ? std::log2(1.0 + signal / noise)
                                        : std::numeric_limits<double>::infinity();
    if (rate < capacity) out.insert(i);
  }
  return out;
}

bool dt_outage(double rate, const CovarianceBundle& bundle) {
  if (bundle.n_a != 0) {
    throw std::invalid_argument("direct transmission bundle must have no transmitting relays");
  }
  return odf_outage(rate, bundle);
}

bool odf_outage(double rate, const CovarianceBundle& bundle) {
  if (bundle.n_nnc != 0) {
    throw std::invalid_argument("decode-and-forward bundle must have no compressing relays");
  }
  InfoEvaluator info(bundle.qv);
  const BundleVars v{bundle};
  const VarSet tx = v.single(bundle.x_source()) | v.x(RelaySet::all(bundle.n_a));
  return !(rate < info.mutual_info(tx, v.single(bundle.y_dest())));
}

double max_min_rate(const CovarianceBundle& bundle, RelaySet decoders) {
  check_decoders(bundle, decoders);
  InfoEvaluator info(bundle.qv);
  const BundleVars v{bundle};
  double best = -std::numeric_limits<double>::infinity();
  any_subset(compressor_set(bundle), [&](RelaySet t) {
    double worst = std::numeric_limits<double>::infinity();
    any_subset(t, [&](RelaySet s) {
      worst = std::min(worst, cut_rate(info, v, decoders, t, s));
      return false;
    });
    best = std::max(best, worst);
    return false;
  });
  return best;
}

bool max_min_outage(double rate, const CovarianceBundle& bundle, RelaySet decoders) {
  check_decoders(bundle, decoders);
  InfoEvaluator info(bundle.qv);
  const BundleVars v{bundle};
  const bool success = any_subset(compressor_set(bundle), [&](RelaySet t) {
    const bool some_cut_fails = any_subset(t, [&](RelaySet s) {
      return !(rate < cut_rate(info, v, decoders, t, s));
    });
    return !some_cut_fails;
  });
  return !success;
}

ActivationState activate(const ProtocolConfig& config, const ChannelRealization& channels) {
  const auto& t = channels.typical;
  ActivationState st;
  st.active = activation_set({t.source_to_relay.data(), static_cast<std::size_t>(t.source_to_relay.size())},
                             {t.relay_to_dest.data(), static_cast<std::size_t>(t.relay_to_dest.size())},
                             config.threshold);
  st.interferer_active.reserve(channels.interferers.size());
  for (const auto& ic : channels.interferers) {
    const auto own = static_cast<std::size_t>(ic.to_typical.rows() - 1);
    if (config.threshold.mode == ThresholdMode::none) {
      st.interferer_active.push_back(RelaySet::all(own));
      continue;
    }
    if (static_cast<std::size_t>(ic.source_to_own_relay.size()) != own) {
      throw std::invalid_argument("threshold activation requires interferer-internal links");
    }
    st.interferer_active.push_back(activation_set(
        {ic.source_to_own_relay.data(), own}, {ic.own_relay_to_dest.data(), own}, config.threshold));
  }
  return st;
}

TrialOutcome evaluate_trial(const ProtocolConfig& config, const ChannelRealization& channels,
                            std::span<const double> nc_values) {
  const auto& typ = channels.typical;
  const auto n_r = static_cast<std::size_t>(typ.source_to_relay.size());

  TrialOutcome out;
  out.verdicts.resize(config.protocols.size());
  for (std::size_t p = 0; p < config.protocols.size(); ++p) {
    const std::size_t width = uses_compression(config.protocols[p]) ? nc_values.size() : 1;
    out.verdicts[p].assign(width, Verdict::success);
  }
  if (channels.interferers.empty() && config.noise_floor == 0.0) {
    out.interference_free = true;
    return out;
  }

  // Interference with every interferer relay in A_x transmitting, seen at all
  // typical relays and the destination.
  ActivationState st = activate(config, channels);
  std::vector<std::size_t> all_receivers(n_r);
  for (std::size_t i = 0; i < n_r; ++i) all_receivers[i] = i;
  const InterferenceStats full = interference_matrix(channels, st.interferer_active, config.p_source,
                                                     config.p_relay, all_receivers, config.noise_floor);
  std::vector<double> relay_interference(n_r);
  for (std::size_t i = 0; i < n_r; ++i) relay_interference[i] = full.relay_power(static_cast<Eigen::Index>(i));
  st.decoders = decoding_set(config.rate, typ, relay_interference, st.active, config.p_source,
                             config.p_relay);

  auto guarded = [](std::vector<Verdict>& slot, std::size_t k, auto&& decide) {
    try {
      slot[k] = decide() ? Verdict::outage : Verdict::success;
    } catch (const NumericalDegeneracy&) {
      slot[k] = Verdict::degenerate;
    }
  };

  const auto active = st.active.indices();
  for (std::size_t p = 0; p < config.protocols.size(); ++p) {
    auto& slot = out.verdicts[p];
    switch (config.protocols[p]) {
      case Protocol::dt: {
        guarded(slot, 0, [&] {
          InterferenceStats qz;
          if (config.dt_interferer_relays) {
            qz = restrict_receivers(full, {});
          } else {
            const std::vector<RelaySet> silent(channels.interferers.size());
            qz = interference_matrix(channels, silent, config.p_source, config.p_relay, {},
                                     config.noise_floor);
          }
          const auto b = build_bundle(config.p_source, config.p_relay, qz.qz, 0.0,
                                      relay_gain_matrix(typ, {}), {});
          return dt_outage(config.rate, b);
        });
        break;
      }
      case Protocol::odf: {
        guarded(slot, 0, [&] {
          const auto u = st.decoders.indices();
          const auto b = build_bundle(config.p_source, config.p_relay, restrict_receivers(full, u).qz,
                                      0.0, relay_gain_matrix(typ, u), {});
          return odf_outage(config.rate, b);
        });
        break;
      }
      case Protocol::nnc:
      case Protocol::mnnc: {
        const bool mixed = config.protocols[p] == Protocol::mnnc;
        // u = A_s in index order; decoders and compressors as positions in u.
        RelaySet decoders;
        std::vector<std::size_t> compressors;
        for (std::size_t k = 0; k < active.size(); ++k) {
          if (mixed && st.decoders.contains(active[k])) {
            decoders.insert(k);
          } else {
            compressors.push_back(k);
          }
        }
        const auto qz = restrict_receivers(full, active);
        const auto gains = relay_gain_matrix(typ, active);
        for (std::size_t k = 0; k < nc_values.size(); ++k) {
          if (compressors.empty() && k > 0) {
            slot[k] = slot[0];
            continue;
          }
          guarded(slot, k, [&] {
            const auto b = build_bundle(config.p_source, config.p_relay, qz.qz, nc_values[k], gains,
                                        compressors);
            return max_min_outage(config.rate, b, decoders);
          });
        }
        break;
      }
    }
  }
  return out;
}

}  // namespace fdrelay
