#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "fdrelay/channel.hpp"
#include "fdrelay/index_set.hpp"

namespace fdrelay {

/// Conditional covariance of the interference seen by the typical receivers.
/// Rows/columns follow the receiver order given at construction, with the
/// typical destination last: diagonal entries are the powers I_{u_k}, I_d and
/// off-diagonal entries the correlations beta.
struct InterferenceStats {
  Eigen::MatrixXcd qz;

  Eigen::Index side() const { return qz.rows(); }
  double destination_power() const { return qz(side() - 1, side() - 1).real(); }
  double relay_power(Eigen::Index k) const { return qz(k, k).real(); }
};

/// Sum over every interfering transmitter t of P_t a_t a_t^*, a_t being the
/// gains from t to (receiver_order..., destination). Interferer x contributes
/// its source plus the relays in transmitting[x]. `noise_floor` is added to the
/// diagonal.
InterferenceStats interference_matrix(const ChannelRealization& channels,
                                      std::span<const RelaySet> transmitting, double p_source,
                                      double p_relay, std::span<const std::size_t> receiver_order,
                                      double noise_floor = 0.0);

/// Principal submatrix for a subset of the receivers (destination always kept).
/// `positions` index into the receiver order of `full`.
InterferenceStats restrict_receivers(const InterferenceStats& full,
                                     std::span<const std::size_t> positions);

}  // namespace fdrelay
