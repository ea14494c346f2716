#include "fdrelay/gaussian_info.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace fdrelay {

namespace {

// Pivots of the unit-diagonal (correlation-scaled) factorization. A pivot is
// the conditional variance of a variable given the earlier ones, relative to
// its marginal variance; below the floor it is indistinguishable from zero.
constexpr double kPivotFloor = 1e-14;
constexpr double kJitter = 1e-12;
constexpr double kJitteredPivotFloor = 1e-11;
constexpr double kNegativeTolerance = 1e-9;
constexpr double kClampTolerance = 1e-9;

double log2_det_impl(const Eigen::MatrixXcd& q) {
  const Eigen::Index n = q.rows();
  if (n == 0) {
    return 0.0;
  }
  const double max_diag = q.diagonal().real().cwiseAbs().maxCoeff();
  Eigen::VectorXd inv_sd(n);
  double log_scale = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = q(i, i).real();
    if (d < -kNegativeTolerance * max_diag) {
      throw NumericalDegeneracy("negative variance on the covariance diagonal");
    }
    if (!(d > 0.0)) {
      return kDegenerateEntropy;
    }
    inv_sd(i) = 1.0 / std::sqrt(d);
    log_scale += std::log2(d);
  }
  Eigen::MatrixXcd c = inv_sd.asDiagonal() * q * inv_sd.asDiagonal();

  auto pivots_log2 = [](const Eigen::LLT<Eigen::MatrixXcd>& llt, double floor, double& out) {
    const auto& l = llt.matrixLLT();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i) {
      const double p = std::norm(l(i, i));
      if (!(p > floor)) {
        return false;
      }
      sum += std::log2(p);
    }
    out = sum;
    return true;
  };

  Eigen::LLT<Eigen::MatrixXcd> llt(c);
  double logdet = 0.0;
  if (llt.info() == Eigen::Success) {
    return pivots_log2(llt, kPivotFloor, logdet) ? log_scale + logdet : kDegenerateEntropy;
  }

  // Rounding can push an exactly-PSD matrix slightly indefinite: retry once.
  c = (0.5 * (c + c.adjoint())).eval();
  c.diagonal().array() += kJitter * c.diagonal().real().sum() / static_cast<double>(n);
  llt.compute(c);
  if (llt.info() == Eigen::Success) {
    return pivots_log2(llt, kJitteredPivotFloor, logdet) ? log_scale + logdet
                                                          : kDegenerateEntropy;
  }

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(c);
  const double min_d = ldlt.vectorD().real().minCoeff();
  if (min_d >= -kNegativeTolerance) {
    return kDegenerateEntropy;
  }
  throw NumericalDegeneracy("covariance submatrix is indefinite (pivot " + std::to_string(min_d) +
                            ")");
}

double checked(double value, Clamp clamp) {
  if (std::isnan(value)) {
    throw NumericalDegeneracy("mutual information is undefined (singular covariance)");
  }
  if (clamp == Clamp::yes && value < 0.0 && value >= -kClampTolerance) {
    return 0.0;
  }
  return value;
}

Eigen::MatrixXcd principal(const Eigen::MatrixXcd& q, std::span<const std::size_t> idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i, j) = q(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
    }
  }
  return out;
}

VarSet to_set(std::span<const std::size_t> idx, Eigen::Index side) {
  VarSet s;
  for (auto i : idx) {
    if (static_cast<Eigen::Index>(i) >= side || i >= VarSet::kCapacity) {
      throw std::out_of_range("variable index " + std::to_string(i) + " out of range");
    }
    if (s.contains(i)) {
      throw std::invalid_argument("duplicate variable index " + std::to_string(i));
    }
    s.insert(i);
  }
  return s;
}

}  // namespace

Eigen::MatrixXcd assemble_qu(double p_source, double p_relay, const Eigen::MatrixXcd& qz,
                             double nc, std::size_t n_a, std::size_t n_nnc) {
  const auto na = static_cast<Eigen::Index>(n_a);
  const auto nn = static_cast<Eigen::Index>(n_nnc);
  if (qz.rows() != na + 1 || qz.cols() != na + 1) {
    throw std::invalid_argument("Q_Z must be square with side N_a + 1");
  }
  if (n_nnc > 0 && !(nc > 0.0)) {
    throw std::invalid_argument("compression noise variance must be positive");
  }
  const Eigen::Index side = 2 * na + nn + 2;
  Eigen::MatrixXcd qu = Eigen::MatrixXcd::Zero(side, side);
  qu(0, 0) = p_source;
  for (Eigen::Index k = 0; k < na; ++k) qu(1 + k, 1 + k) = p_relay;
  qu.block(1 + na, 1 + na, na + 1, na + 1) = qz;
  for (Eigen::Index j = 0; j < nn; ++j) qu(2 + 2 * na + j, 2 + 2 * na + j) = nc;
  return qu;
}

Eigen::MatrixXcd relay_gain_matrix(const TypicalChannels& channels,
                                   std::span<const std::size_t> transmitting) {
  const auto na = static_cast<Eigen::Index>(transmitting.size());
  const Eigen::Index n_r = channels.source_to_relay.size();
  for (auto u : transmitting) {
    if (static_cast<Eigen::Index>(u) >= n_r) {
      throw std::out_of_range("transmitting relay index out of range");
    }
  }
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(na + 1, na + 1);
  for (Eigen::Index k = 0; k < na; ++k) {
    const auto rx = static_cast<Eigen::Index>(transmitting[k]);
    g(k, 0) = channels.source_to_relay(rx);
    for (Eigen::Index m = 0; m < na; ++m) {
      if (m != k) {
        g(k, 1 + m) = channels.relay_to_relay(static_cast<Eigen::Index>(transmitting[m]), rx);
      }
    }
  }
  g(na, 0) = channels.source_to_dest;
  for (Eigen::Index m = 0; m < na; ++m) {
    g(na, 1 + m) = channels.relay_to_dest(static_cast<Eigen::Index>(transmitting[m]));
  }
  return g;
}

Eigen::MatrixXcd assemble_htilde(const Eigen::MatrixXcd& gains,
                                 std::span<const std::size_t> nnc_positions) {
  if (gains.rows() != gains.cols() || gains.rows() < 1) {
    throw std::invalid_argument("gain matrix must be square with side N_a + 1");
  }
  const Eigen::Index na = gains.rows() - 1;
  const auto nn = static_cast<Eigen::Index>(nnc_positions.size());
  std::vector<bool> seen(static_cast<std::size_t>(na), false);
  for (auto t : nnc_positions) {
    if (static_cast<Eigen::Index>(t) >= na) {
      throw std::out_of_range("compressing relay position out of range");
    }
    if (seen[t]) {
      throw std::invalid_argument("compressing relay positions must be distinct");
    }
    seen[t] = true;
  }

  const Eigen::Index side = 2 * na + nn + 2;
  const Eigen::Index z_u = 1 + na;
  const Eigen::Index z_d = 1 + 2 * na;
  const Eigen::Index z_c = 2 + 2 * na;
  Eigen::MatrixXcd ht = Eigen::MatrixXcd::Zero(side, side);
  // Transmitted symbols pass through unchanged.
  ht.topLeftCorner(na + 1, na + 1).setIdentity();
  // Y_u = H (X_s, X_u) + Z_u
  for (Eigen::Index k = 0; k < na; ++k) {
    ht.block(na + 1 + k, 0, 1, na + 1) = gains.row(k);
    ht(na + 1 + k, z_u + k) = 1.0;
  }
  // Y_d
  ht.block(z_d, 0, 1, na + 1) = gains.row(na);
  ht(z_d, z_d) = 1.0;
  // Yhat_t = Y_t + Z_c
  for (Eigen::Index j = 0; j < nn; ++j) {
    const auto t = static_cast<Eigen::Index>(nnc_positions[j]);
    ht.block(z_c + j, 0, 1, na + 1) = gains.row(t);
    ht(z_c + j, z_u + t) = 1.0;
    ht(z_c + j, z_c + j) = 1.0;
  }
  return ht;
}

Eigen::MatrixXcd compute_qv(const Eigen::MatrixXcd& qu, const Eigen::MatrixXcd& htilde) {
  if (htilde.cols() != qu.rows() || qu.rows() != qu.cols()) {
    throw std::invalid_argument("Htilde and Q_u are not conformable");
  }
  Eigen::MatrixXcd qv = htilde * qu * htilde.adjoint();
  return 0.5 * (qv + qv.adjoint());
}

CovarianceBundle build_bundle(double p_source, double p_relay, const Eigen::MatrixXcd& qz,
                              double nc, const Eigen::MatrixXcd& gains,
                              std::span<const std::size_t> nnc_positions) {
  CovarianceBundle b;
  b.n_a = static_cast<std::size_t>(gains.rows() - 1);
  b.n_nnc = nnc_positions.size();
  b.nnc_positions.assign(nnc_positions.begin(), nnc_positions.end());
  b.qu = assemble_qu(p_source, p_relay, qz, nc, b.n_a, b.n_nnc);
  b.htilde = assemble_htilde(gains, nnc_positions);
  b.qv = compute_qv(b.qu, b.htilde);
  return b;
}

double log2_det(const Eigen::MatrixXcd& q) { return log2_det_impl(q); }

double joint_entropy(const Eigen::MatrixXcd& qv, std::span<const std::size_t> subset) {
  if (subset.empty()) {
    throw std::invalid_argument("entropy of an empty variable set");
  }
  to_set(subset, qv.rows());
  const double ld = log2_det_impl(principal(qv, subset));
  return static_cast<double>(subset.size()) * std::log2(std::numbers::pi * std::numbers::e) + ld;
}

double mutual_info(const Eigen::MatrixXcd& qv, std::span<const std::size_t> a,
                   std::span<const std::size_t> b, Clamp clamp) {
  return conditional_mutual_info(qv, a, b, {}, clamp);
}

double conditional_mutual_info(const Eigen::MatrixXcd& qv, std::span<const std::size_t> a,
                               std::span<const std::size_t> b, std::span<const std::size_t> c,
                               Clamp clamp) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("mutual information needs non-empty variable sets");
  }
  const VarSet sa = to_set(a, qv.rows());
  const VarSet sb = to_set(b, qv.rows());
  const VarSet sc = to_set(c, qv.rows());
  if (!sa.disjoint(sb) || !sa.disjoint(sc) || !sb.disjoint(sc)) {
    throw std::invalid_argument("mutual information sets must be pairwise disjoint");
  }
  InfoEvaluator eval(qv);
  return eval.conditional_mutual_info(sa, sb, sc, clamp);
}

InfoEvaluator::InfoEvaluator(const Eigen::MatrixXcd& qv) : qv_(qv) {
  if (qv.rows() > static_cast<Eigen::Index>(VarSet::kCapacity)) {
    throw std::invalid_argument("at most 64 variables are supported");
  }
}

double InfoEvaluator::log2_det(VarSet s) {
  if (s.empty()) {
    return 0.0;
  }
  if (auto it = cache_.find(s.bits()); it != cache_.end()) {
    return it->second;
  }
  const auto idx = s.indices();
  const auto n = static_cast<Eigen::Index>(idx.size());
  scratch_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      scratch_(i, j) = qv_(static_cast<Eigen::Index>(idx[i]), static_cast<Eigen::Index>(idx[j]));
    }
  }
  const double value = log2_det_impl(scratch_);
  cache_.emplace(s.bits(), value);
  return value;
}

double InfoEvaluator::mutual_info(VarSet a, VarSet b, Clamp clamp) {
  return checked(log2_det(a) + log2_det(b) - log2_det(a | b), clamp);
}

double InfoEvaluator::conditional_mutual_info(VarSet a, VarSet b, VarSet c, Clamp clamp) {
  if (c.empty()) {
    return mutual_info(a, b, clamp);
  }
  return checked(log2_det(a | c) + log2_det(b | c) - log2_det(a | b | c) - log2_det(c), clamp);
}

}  // namespace fdrelay
