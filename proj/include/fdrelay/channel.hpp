#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "fdrelay/geometry.hpp"
#include "fdrelay/random.hpp"

namespace fdrelay {

using cplx = std::complex<double>;

/// Raised when two nodes coincide and the path loss is unbounded.
class SingularPathLoss : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// ||a - b||^-alpha.
double path_loss(Point a, Point b, double alpha);

/// Unit-variance circularly symmetric complex Gaussian.
cplx sample_fading(Rng& rng);

/// Links inside the typical cluster. Relay indices are 0-based here.
struct TypicalChannels {
  Eigen::VectorXcd source_to_relay;  // g_{s,i}
  cplx source_to_dest{};             // g_{s,d}
  Eigen::MatrixXcd relay_to_relay;   // (m, i) = g_{m,i}, zero diagonal
  Eigen::VectorXcd relay_to_dest;    // g_{i,d}
};

/// Links of one interfering cluster.
struct InterfererChannels {
  /// Row 0 is the interfering source, row 1 + m its m-th relay. Columns are the
  /// typical relays 0..n_r-1 followed by the typical destination.
  Eigen::MatrixXcd to_typical;
  /// Own-cluster links; empty unless requested (threshold activation).
  Eigen::VectorXcd source_to_own_relay;
  Eigen::VectorXcd own_relay_to_dest;
};

struct ChannelRealization {
  TypicalChannels typical;
  std::vector<InterfererChannels> interferers;
};

struct ChannelStreams {
  Rng& typical;
  Rng& interferer;
  Rng& internal;
};

/// Draws every gain h * sqrt(l) consumed downstream. Own-cluster links of the
/// interferers are drawn only when `internal_links` is set.
ChannelRealization realize_channels(const NetworkGeometry& geometry, double alpha,
                                    bool internal_links, ChannelStreams streams);
ChannelRealization realize_channels(const NetworkGeometry& geometry, double alpha,
                                    bool internal_links, Rng& rng);

}  // namespace fdrelay
