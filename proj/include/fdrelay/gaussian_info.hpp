#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "fdrelay/channel.hpp"
#include "fdrelay/index_set.hpp"

namespace fdrelay {

/// A covariance submatrix is not positive semidefinite beyond rounding, or an
/// information quantity came out undefined (infinity minus infinity).
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Entropy/log-det value reported for a singular covariance.
inline constexpr double kDegenerateEntropy = -std::numeric_limits<double>::infinity();

/// Covariance of v = (X_s, X_u, Y_u, Y_d, Yhat_t) for one protocol state,
/// obtained as Q_v = Htilde Q_u Htilde^* with
///   u = (X_s, X_u, Z_u, Z_d, Z_c)
/// where u_1..u_{N_a} are the transmitting typical relays and t_1..t_{N_nnc}
/// (positions within u) the compressing ones.
struct CovarianceBundle {
  Eigen::MatrixXcd qu;
  Eigen::MatrixXcd htilde;
  Eigen::MatrixXcd qv;
  std::size_t n_a = 0;
  std::size_t n_nnc = 0;
  /// t_j as positions within u; Yhat_{t_j} is variable y_hat(j).
  std::vector<std::size_t> nnc_positions;

  std::size_t side() const { return 2 * n_a + n_nnc + 2; }
  std::size_t x_source() const { return 0; }
  std::size_t x_relay(std::size_t k) const { return 1 + k; }
  std::size_t y_relay(std::size_t k) const { return 1 + n_a + k; }
  std::size_t y_dest() const { return 1 + 2 * n_a; }
  std::size_t y_hat(std::size_t j) const { return 2 + 2 * n_a + j; }
};

/// diag(P_s, P_r I_{N_a}, Q_Z, n_c I_{N_nnc}).
Eigen::MatrixXcd assemble_qu(double p_source, double p_relay, const Eigen::MatrixXcd& qz,
                             double nc, std::size_t n_a, std::size_t n_nnc);

/// Gains into the transmitting relays and the destination. Row k < N_a is
/// receiver u_k, row N_a the destination; column 0 is the source and column
/// 1 + m relay u_m. Entries are full gains g = h sqrt(l), with zeros where a
/// relay would hear itself.
Eigen::MatrixXcd relay_gain_matrix(const TypicalChannels& channels,
                                   std::span<const std::size_t> transmitting);

/// Maps u to v. `gains` is the (N_a+1) x (N_a+1) output of relay_gain_matrix;
/// `nnc_positions` are the t_j as positions 0..N_a-1 within u.
Eigen::MatrixXcd assemble_htilde(const Eigen::MatrixXcd& gains,
                                 std::span<const std::size_t> nnc_positions);

/// Htilde Q_u Htilde^*, symmetrized.
Eigen::MatrixXcd compute_qv(const Eigen::MatrixXcd& qu, const Eigen::MatrixXcd& htilde);

CovarianceBundle build_bundle(double p_source, double p_relay, const Eigen::MatrixXcd& qz,
                              double nc, const Eigen::MatrixXcd& gains,
                              std::span<const std::size_t> nnc_positions);

/// log2 det of a Hermitian PSD matrix; kDegenerateEntropy when singular.
/// Throws NumericalDegeneracy when clearly indefinite.
double log2_det(const Eigen::MatrixXcd& q);

/// log2 det(pi e Q_v[subset, subset]) in bits.
double joint_entropy(const Eigen::MatrixXcd& qv, std::span<const std::size_t> subset);

enum class Clamp { yes, no };

/// Values in [-1e-9, 0) are clamped to zero unless `clamp` is Clamp::no.
double mutual_info(const Eigen::MatrixXcd& qv, std::span<const std::size_t> a,
                   std::span<const std::size_t> b, Clamp clamp = Clamp::yes);
double conditional_mutual_info(const Eigen::MatrixXcd& qv, std::span<const std::size_t> a,
                               std::span<const std::size_t> b, std::span<const std::size_t> c,
                               Clamp clamp = Clamp::yes);

/// Memoizing evaluator over the variables of one Q_v (at most 64).
class InfoEvaluator {
 public:
  explicit InfoEvaluator(const Eigen::MatrixXcd& qv);

  /// log2 det of the principal submatrix; the pi*e terms are left out since
  /// they cancel in every mutual information.
  double log2_det(VarSet s);
  double mutual_info(VarSet a, VarSet b, Clamp clamp = Clamp::yes);
  double conditional_mutual_info(VarSet a, VarSet b, VarSet c, Clamp clamp = Clamp::yes);

 private:
  const Eigen::MatrixXcd& qv_;
  Eigen::MatrixXcd scratch_;
  std::unordered_map<std::uint64_t, double> cache_;
};

}  // namespace fdrelay
