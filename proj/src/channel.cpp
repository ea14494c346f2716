#include "fdrelay/channel.hpp"

#include <cmath>
#include <numbers>

namespace fdrelay {

namespace {

// Amplitude scale sqrt(l) computed from the squared distance.
double amplitude(Point a, Point b, double alpha) {
  const double d2 = squared_distance(a, b);
  if (!(d2 > 0.0)) {
    throw SingularPathLoss("coincident nodes have unbounded path loss");
  }
  if (alpha == 4.0) {
    return 1.0 / d2;
  }
  return std::pow(d2, -alpha / 4.0);
}

cplx gain(Point a, Point b, double alpha, Rng& rng) {
  return sample_fading(rng) * amplitude(a, b, alpha);
}

}  // namespace

double path_loss(Point a, Point b, double alpha) {
  const double amp = amplitude(a, b, alpha);
  return amp * amp;
}

cplx sample_fading(Rng& rng) {
  std::normal_distribution<double> component(0.0, std::numbers::sqrt2 / 2.0);
  const double re = component(rng);
  const double im = component(rng);
  return {re, im};
}

ChannelRealization realize_channels(const NetworkGeometry& geometry, double alpha,
                                    bool internal_links, ChannelStreams streams) {
  const auto& typ = geometry.typical;
  const Eigen::Index n_r = static_cast<Eigen::Index>(typ.relays.size());
  const Point dest = typ.destination;

  ChannelRealization out;
  auto& t = out.typical;
  t.source_to_relay.resize(n_r);
  t.relay_to_dest.resize(n_r);
  t.relay_to_relay = Eigen::MatrixXcd::Zero(n_r, n_r);
  t.source_to_dest = gain(typ.source, dest, alpha, streams.typical);
  for (Eigen::Index i = 0; i < n_r; ++i) {
    t.source_to_relay(i) = gain(typ.source, typ.relays[i], alpha, streams.typical);
    t.relay_to_dest(i) = gain(typ.relays[i], dest, alpha, streams.typical);
  }
  for (Eigen::Index m = 0; m < n_r; ++m) {
    for (Eigen::Index i = 0; i < n_r; ++i) {
      if (m != i) {
        t.relay_to_relay(m, i) = gain(typ.relays[m], typ.relays[i], alpha, streams.typical);
      }
    }
  }

  out.interferers.reserve(geometry.interferers.size());
  for (const auto& cl : geometry.interferers) {
    const Eigen::Index own = static_cast<Eigen::Index>(cl.relays.size());
    InterfererChannels ic;
    ic.to_typical.resize(1 + own, n_r + 1);
    for (Eigen::Index row = 0; row <= own; ++row) {
      const Point tx = row == 0 ? cl.source : cl.relays[row - 1];
      for (Eigen::Index i = 0; i < n_r; ++i) {
        ic.to_typical(row, i) = gain(tx, typ.relays[i], alpha, streams.interferer);
      }
      ic.to_typical(row, n_r) = gain(tx, dest, alpha, streams.interferer);
    }
    if (internal_links) {
      ic.source_to_own_relay.resize(own);
      ic.own_relay_to_dest.resize(own);
      for (Eigen::Index m = 0; m < own; ++m) {
        ic.source_to_own_relay(m) = gain(cl.source, cl.relays[m], alpha, streams.internal);
        ic.own_relay_to_dest(m) = gain(cl.relays[m], cl.destination, alpha, streams.internal);
      }
    }
    out.interferers.push_back(std::move(ic));
  }
  return out;
}

ChannelRealization realize_channels(const NetworkGeometry& geometry, double alpha,
                                    bool internal_links, Rng& rng) {
  return realize_channels(geometry, alpha, internal_links, ChannelStreams{rng, rng, rng});
}

}  // namespace fdrelay
