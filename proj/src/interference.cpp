#include "fdrelay/interference.hpp"

#include <stdexcept>
#include <vector>

namespace fdrelay {

InterferenceStats interference_matrix(const ChannelRealization& channels,
                                      std::span<const RelaySet> transmitting, double p_source,
                                      double p_relay, std::span<const std::size_t> receiver_order,
                                      double noise_floor) {
  if (transmitting.size() != channels.interferers.size()) {
    throw std::invalid_argument("one transmitting set per interferer is required");
  }
  if (p_source < 0.0 || p_relay < 0.0 || noise_floor < 0.0) {
    throw std::invalid_argument("powers and noise floor must be non-negative");
  }

  const Eigen::Index side = static_cast<Eigen::Index>(receiver_order.size()) + 1;
  const Eigen::Index n_r = channels.typical.source_to_relay.size();
  std::vector<Eigen::Index> cols;
  cols.reserve(side);
  for (auto r : receiver_order) {
    if (static_cast<Eigen::Index>(r) >= n_r) {
      throw std::out_of_range("receiver index beyond the typical relays");
    }
    cols.push_back(static_cast<Eigen::Index>(r));
  }
  cols.push_back(n_r);

  InterferenceStats out;
  out.qz = Eigen::MatrixXcd::Zero(side, side);
  Eigen::VectorXcd a(side);
  auto accumulate = [&](const Eigen::MatrixXcd& gains, Eigen::Index row, double power) {
    for (Eigen::Index k = 0; k < side; ++k) a(k) = gains(row, cols[k]);
    out.qz.noalias() += power * a * a.adjoint();
  };

  for (std::size_t x = 0; x < channels.interferers.size(); ++x) {
    const auto& g = channels.interferers[x].to_typical;
    accumulate(g, 0, p_source);
    for (auto m : transmitting[x].indices()) {
      if (static_cast<Eigen::Index>(m) + 1 >= g.rows()) {
        throw std::out_of_range("transmitting relay index beyond the interferer's relays");
      }
      accumulate(g, static_cast<Eigen::Index>(m) + 1, p_relay);
    }
  }
  out.qz.diagonal().array() += noise_floor;
  return out;
}

InterferenceStats restrict_receivers(const InterferenceStats& full,
                                     std::span<const std::size_t> positions) {
  const Eigen::Index side = static_cast<Eigen::Index>(positions.size()) + 1;
  std::vector<Eigen::Index> idx(positions.begin(), positions.end());
  idx.push_back(full.side() - 1);
  InterferenceStats out;
  out.qz.resize(side, side);
  for (Eigen::Index i = 0; i < side; ++i) {
    for (Eigen::Index j = 0; j < side; ++j) {
      out.qz(i, j) = full.qz(idx[i], idx[j]);
    }
  }
  return out;
}

}  // namespace fdrelay
