#pragma once

// Test-only helpers: random instances, a Kolmogorov-Smirnov p-value and
// brute-force reference implementations that share no code with the library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "fdrelay/channel.hpp"
#include "fdrelay/index_set.hpp"

namespace testing {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline cplx gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  const double re = n(rng);
  return {re, n(rng)};
}

inline MatrixXcd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
  MatrixXcd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = gaussian(rng);
  return m;
}

/// A A^* with A of shape n x rank; full rank when rank >= n.
inline MatrixXcd random_psd(Eigen::Index n, Eigen::Index rank, std::mt19937_64& rng) {
  const MatrixXcd a = random_matrix(n, rank, rng);
  return a * a.adjoint();
}

/// Asymptotic Kolmogorov distribution tail with the Stephens small-sample
/// correction.
inline double ks_pvalue(std::vector<double> samples, auto cdf) {
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  const double sn = std::sqrt(n);
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = 2.0 * ((k % 2) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

inline double max_abs(const MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

inline double min_eigenvalue(const MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(m);
  return es.eigenvalues().minCoeff();
}

/// log2 |det| via LU, -inf when the determinant is not positive.
inline double lu_log2_det(const MatrixXcd& m) {
  if (m.rows() == 0) return 0.0;
  const double det = Eigen::PartialPivLU<MatrixXcd>(m).determinant().real();
  return det > 0.0 ? std::log2(det) : -std::numeric_limits<double>::infinity();
}

inline MatrixXcd principal(const MatrixXcd& q, const std::vector<std::size_t>& idx) {
  MatrixXcd out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = q(idx[i], idx[j]);
  return out;
}

inline std::vector<std::size_t> join(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

/// I(A;B|C) from LU determinants of the four principal submatrices.
inline double oracle_cmi(const MatrixXcd& q, const std::vector<std::size_t>& a,
                         const std::vector<std::size_t>& b, const std::vector<std::size_t>& c) {
  const auto h = [&](const std::vector<std::size_t>& s) { return lu_log2_det(principal(q, s)); };
  return h(join(a, c)) + h(join(b, c)) - h(join(join(a, b), c)) - h(c);
}

/// Interference covariance by explicit accumulation over transmitters.
/// `transmitting[x]` lists relay indices of interferer x.
inline MatrixXcd oracle_qz(const fdrelay::ChannelRealization& ch,
                           const std::vector<std::vector<std::size_t>>& transmitting, double p_s,
                           double p_r, const std::vector<std::size_t>& receivers) {
  const auto n = static_cast<Eigen::Index>(receivers.size() + 1);
  MatrixXcd q = MatrixXcd::Zero(n, n);
  for (std::size_t x = 0; x < ch.interferers.size(); ++x) {
    const auto& g = ch.interferers[x].to_typical;
    const Eigen::Index d_col = g.cols() - 1;
    std::vector<std::pair<Eigen::Index, double>> tx{{0, p_s}};
    for (auto m : transmitting[x]) tx.emplace_back(static_cast<Eigen::Index>(1 + m), p_r);
    for (auto [row, power] : tx) {
      VectorXcd a(n);
      for (std::size_t k = 0; k < receivers.size(); ++k) a(k) = g(row, receivers[k]);
      a(n - 1) = g(row, d_col);
      for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) q(i, j) += power * a(i) * std::conj(a(j));
    }
  }
  return q;
}

/// Covariance of v for transmitting relays `u` (typical indices) of which the
/// positions `nnc` compress, written out symbol by symbol.
struct OracleBundle {
  MatrixXcd qv;
  std::size_t n_a = 0;
  std::vector<std::size_t> nnc;

  std::size_t xs() const { return 0; }
  std::size_t x(std::size_t k) const { return 1 + k; }
  std::size_t y(std::size_t k) const { return 1 + n_a + k; }
  std::size_t yd() const { return 1 + 2 * n_a; }
  // Yhat of the relay at position k of u.
  std::size_t yhat(std::size_t k) const {
    const auto it = std::find(nnc.begin(), nnc.end(), k);
    return 2 + 2 * n_a + static_cast<std::size_t>(it - nnc.begin());
  }
};

inline OracleBundle oracle_bundle(const fdrelay::TypicalChannels& t, const MatrixXcd& qz,
                                  double p_s, double p_r, double nc,
                                  const std::vector<std::size_t>& u,
                                  const std::vector<std::size_t>& nnc) {
  const std::size_t na = u.size();
  const std::size_t nn = nnc.size();
  const std::size_t side = 2 * na + nn + 2;
  // Base variables: X_s, X_u (na), Z_u (na), Z_d, Z_c (nn).
  MatrixXcd qbase = MatrixXcd::Zero(side, side);
  qbase(0, 0) = p_s;
  for (std::size_t k = 0; k < na; ++k) qbase(1 + k, 1 + k) = p_r;
  qbase.block(1 + na, 1 + na, na + 1, na + 1) = qz;
  for (std::size_t j = 0; j < nn; ++j) qbase(2 + 2 * na + j, 2 + 2 * na + j) = nc;

  MatrixXcd coef = MatrixXcd::Zero(side, side);
  coef(0, 0) = 1.0;
  for (std::size_t k = 0; k < na; ++k) coef(1 + k, 1 + k) = 1.0;
  auto received = [&](std::size_t k) {  // Y at relay u_k
    Eigen::RowVectorXcd r = Eigen::RowVectorXcd::Zero(side);
    r(0) = t.source_to_relay(u[k]);
    for (std::size_t m = 0; m < na; ++m)
      if (m != k) r(1 + m) = t.relay_to_relay(u[m], u[k]);
    r(1 + na + k) = 1.0;
    return r;
  };
  for (std::size_t k = 0; k < na; ++k) coef.row(1 + na + k) = received(k);
  coef(1 + 2 * na, 0) = t.source_to_dest;
  for (std::size_t m = 0; m < na; ++m) coef(1 + 2 * na, 1 + m) = t.relay_to_dest(u[m]);
  coef(1 + 2 * na, 1 + 2 * na) = 1.0;
  for (std::size_t j = 0; j < nn; ++j) {
    coef.row(2 + 2 * na + j) = received(nnc[j]);
    coef(2 + 2 * na + j, 2 + 2 * na + j) = 1.0;
  }
  OracleBundle b;
  b.qv = coef * qbase * coef.adjoint();
  b.n_a = na;
  b.nnc = nnc;
  return b;
}

/// max over T of min over S of the cut rates, by plain enumeration of every
/// bitmask pair; `decoders` are positions within u.
inline double oracle_max_min(const OracleBundle& b, const std::vector<std::size_t>& decoders) {
  const std::size_t n = b.nnc.size();
  double best = -std::numeric_limits<double>::infinity();
  for (std::uint32_t tm = 0; tm < (1u << n); ++tm) {
    double worst = std::numeric_limits<double>::infinity();
    for (std::uint32_t sm = 0; sm < (1u << n); ++sm) {
      if ((sm & ~tm) != 0) continue;
      std::vector<std::size_t> x_left{b.xs()}, yhat_sc, x_sc, yhat_s, y_s, x_t;
      for (auto d : decoders) x_left.push_back(b.x(d));
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t k = b.nnc[j];
        if (!((tm >> j) & 1u)) continue;
        x_t.push_back(b.x(k));
        if ((sm >> j) & 1u) {
          x_left.push_back(b.x(k));
          yhat_s.push_back(b.yhat(k));
          y_s.push_back(b.y(k));
        } else {
          yhat_sc.push_back(b.yhat(k));
          x_sc.push_back(b.x(k));
        }
      }
      double f = oracle_cmi(b.qv, x_left, join(yhat_sc, {b.yd()}), x_sc);
      if (sm != 0) {
        std::vector<std::size_t> cond{b.xs()};
        for (auto d : decoders) cond.push_back(b.x(d));
        cond = join(join(join(cond, x_t), yhat_sc), {b.yd()});
        f -= oracle_cmi(b.qv, yhat_s, y_s, cond);
      }
      worst = std::min(worst, f);
    }
    best = std::max(best, worst);
  }
  return best;
}

/// A random typical cluster with n_r relays: gains of moderate spread.
inline fdrelay::TypicalChannels random_typical(std::size_t n_r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> scale(0.05, 3.0);
  fdrelay::TypicalChannels t;
  const auto n = static_cast<Eigen::Index>(n_r);
  t.source_to_relay.resize(n);
  t.relay_to_dest.resize(n);
  t.relay_to_relay = MatrixXcd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    t.source_to_relay(i) = scale(rng) * gaussian(rng);
    t.relay_to_dest(i) = scale(rng) * gaussian(rng);
    for (Eigen::Index j = 0; j < n; ++j)
      if (i != j) t.relay_to_relay(i, j) = scale(rng) * gaussian(rng);
  }
  t.source_to_dest = scale(rng) * 0.2 * gaussian(rng);
  return t;
}

}  // namespace testing
