#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fdrelay/gaussian_info.hpp"
#include "support.hpp"

using namespace fdrelay;
using Eigen::MatrixXcd;
using idx = std::vector<std::size_t>;

namespace {

const double kLog2PiE = std::log2(std::numbers::pi * std::numbers::e);

MatrixXcd diag(std::initializer_list<double> d) {
  MatrixXcd m = MatrixXcd::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double v : d) m(i, i) = v, ++i;
  return m;
}

}  // namespace

TEST_CASE("Q_u layout") {
  const MatrixXcd qz1 = diag({0.7});
  auto qu = assemble_qu(1.0, 0.1, qz1, 0.0, 0, 0);
  CHECK(qu.rows() == 2);
  CHECK(testing::max_abs(qu - diag({1.0, 0.7})) == 0.0);

  MatrixXcd qz2(2, 2);
  qz2 << 2.0, cplx(0.1, 0.2), cplx(0.1, -0.2), 3.0;
  qu = assemble_qu(1.0, 0.1, qz2, 0.0, 1, 0);
  CHECK(qu.rows() == 4);
  CHECK(qu(1, 1) == cplx(0.1));
  CHECK(testing::max_abs(qu.block(2, 2, 2, 2) - qz2) == 0.0);
  CHECK(qu(0, 2) == cplx{});

  qu = assemble_qu(1.0, 0.1, qz2, 1e-4, 1, 1);
  CHECK(qu.rows() == 5);
  CHECK(qu(4, 4) == cplx(1e-4));

  CHECK_THROWS(assemble_qu(1.0, 0.1, qz2, 1e-4, 2, 0));
  CHECK_THROWS(assemble_qu(1.0, 0.1, qz2, 0.0, 1, 1));
}

TEST_CASE("H-tilde layout") {
  const cplx gsd(0.3, -0.4);
  MatrixXcd g0(1, 1);
  g0 << gsd;
  auto ht = assemble_htilde(g0, {});
  MatrixXcd expected(2, 2);
  expected << 1.0, 0.0, gsd, 1.0;
  CHECK(testing::max_abs(ht - expected) == 0.0);

  // One relay: u = (X_s, X_1, Z_1, Z_d), v = (X_s, X_1, Y_1, Y_d).
  const cplx gs1(1.1, 0.2), g1d(-0.5, 0.7);
  MatrixXcd g1(2, 2);
  g1 << gs1, 0.0, gsd, g1d;
  ht = assemble_htilde(g1, {});
  MatrixXcd e1(4, 4);
  e1 << 1, 0, 0, 0,
        0, 1, 0, 0,
        gs1, 0, 1, 0,
        gsd, g1d, 0, 1;
  CHECK(testing::max_abs(ht - e1) == 0.0);

  ht = assemble_htilde(g1, idx{0});
  REQUIRE(ht.rows() == 5);
  Eigen::RowVectorXcd last(5);
  last << gs1, 0, 1, 0, 1;
  CHECK(testing::max_abs(ht.row(4) - last) == 0.0);

  CHECK_THROWS(assemble_htilde(g1, idx{1}));
  MatrixXcd g2 = MatrixXcd::Zero(3, 3);
  CHECK_THROWS(assemble_htilde(g2, idx{0, 0}));
}

TEST_CASE("Q_v") {
  std::mt19937_64 rng(5);
  const MatrixXcd qu = testing::random_psd(4, 4, rng);
  CHECK(testing::max_abs(compute_qv(qu, MatrixXcd::Identity(4, 4)) - qu) < 1e-15);

  const cplx g(0.8, -0.6);
  const double ps = 1.5, id = 0.2;
  MatrixXcd gm(1, 1);
  gm << g;
  const auto b = build_bundle(ps, 0.1, diag({id}), 0.0, gm, {});
  MatrixXcd expected(2, 2);
  expected << ps, ps * std::conj(g), ps * g, std::norm(g) * ps + id;
  CHECK(testing::max_abs(b.qv - expected) < 1e-15);

  for (int i = 0; i < 100; ++i) {
    const MatrixXcd q = testing::random_psd(6, 3, rng);
    const MatrixXcd h = testing::random_matrix(6, 6, rng);
    const MatrixXcd qv = compute_qv(q, h);
    CHECK(testing::min_eigenvalue(qv) >= -1e-10 * qv.trace().real());
  }
  CHECK_THROWS(compute_qv(qu, MatrixXcd::Identity(3, 3)));
}

TEST_CASE("bundle matches the symbol-by-symbol oracle") {
  std::mt19937_64 rng(6);
  for (int inst = 0; inst < 50; ++inst) {
    const auto t = testing::random_typical(3, rng);
    const std::vector<std::size_t> u{2, 0};
    const MatrixXcd qz = testing::random_psd(3, 3, rng);
    const auto gains = relay_gain_matrix(t, u);
    const auto b = build_bundle(1.0, 0.2, qz, 1e-3, gains, idx{1});
    const auto o = testing::oracle_bundle(t, qz, 1.0, 0.2, 1e-3, u, {1});
    CHECK(testing::max_abs(b.qv - o.qv) <= 1e-12 * testing::max_abs(o.qv));
  }
}

TEST_CASE("deleting a compressed observation equals the smaller bundle") {
  std::mt19937_64 rng(7);
  const auto t = testing::random_typical(2, rng);
  const MatrixXcd qz = testing::random_psd(3, 3, rng);
  const auto gains = relay_gain_matrix(t, idx{0, 1});
  const auto big = build_bundle(1.0, 0.1, qz, 1e-2, gains, idx{0, 1});
  const auto small = build_bundle(1.0, 0.1, qz, 1e-2, gains, idx{1});
  idx keep;
  for (std::size_t i = 0; i < big.side(); ++i)
    if (i != big.y_hat(0)) keep.push_back(i);
  CHECK(testing::max_abs(testing::principal(big.qv, keep) - small.qv) < 1e-14);
}

TEST_CASE("entropy and log-determinant") {
  MatrixXcd one = diag({1.0});
  CHECK(joint_entropy(one, idx{0}) == doctest::Approx(3.0941).epsilon(1e-4));
  CHECK(joint_entropy(one, idx{0}) == doctest::Approx(kLog2PiE));

  const MatrixXcd d = diag({2.0, 5.0});
  CHECK(joint_entropy(d, idx{0, 1}) ==
        doctest::Approx(joint_entropy(d, idx{0}) + joint_entropy(d, idx{1})));

  MatrixXcd rank1(2, 2);
  rank1 << 1.0, cplx(0, 2.0), cplx(0, -2.0), 4.0;
  CHECK(joint_entropy(rank1, idx{0, 1}) == kDegenerateEntropy);
  CHECK(log2_det(rank1) == kDegenerateEntropy);

  MatrixXcd indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  CHECK_THROWS_AS(log2_det(indefinite), NumericalDegeneracy);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 50; ++i) {
    const MatrixXcd q = testing::random_psd(5, 7, rng);
    CHECK(log2_det(q) == doctest::Approx(testing::lu_log2_det(q)).epsilon(1e-10));
  }
  CHECK_THROWS(joint_entropy(one, idx{}));
  CHECK_THROWS(joint_entropy(one, idx{1}));
}

TEST_CASE("mutual information") {
  // X ~ CN(0,1), Y = X + Z.
  MatrixXcd xy(2, 2);
  xy << 1.0, 1.0, 1.0, 2.0;
  CHECK(mutual_info(xy, idx{0}, idx{1}) == doctest::Approx(1.0));

  MatrixXcd block = MatrixXcd::Zero(4, 4);
  std::mt19937_64 rng(9);
  block.topLeftCorner(2, 2) = testing::random_psd(2, 2, rng);
  block.bottomRightCorner(2, 2) = testing::random_psd(2, 2, rng);
  CHECK(mutual_info(block, idx{0, 1}, idx{2, 3}) == 0.0);

  for (int i = 0; i < 50; ++i) {
    const MatrixXcd q = testing::random_psd(4, 4, rng);
    const double det_ratio = std::log2(
        (Eigen::PartialPivLU<MatrixXcd>(q.topLeftCorner(2, 2)).determinant() *
         Eigen::PartialPivLU<MatrixXcd>(q.bottomRightCorner(2, 2)).determinant() /
         Eigen::PartialPivLU<MatrixXcd>(q).determinant())
            .real());
    CHECK(mutual_info(q, idx{0, 1}, idx{2, 3}) == doctest::Approx(det_ratio).epsilon(1e-10));
  }
  CHECK_THROWS_AS(mutual_info(xy, idx{0}, idx{0}), std::invalid_argument);
}

TEST_CASE("conditional mutual information") {
  std::mt19937_64 rng(10);
  const MatrixXcd q = testing::random_psd(6, 6, rng);
  CHECK(conditional_mutual_info(q, idx{0}, idx{1, 2}, idx{}) ==
        doctest::Approx(mutual_info(q, idx{0}, idx{1, 2})));

  SUBCASE("Markov chain A - C - B") {
    // A ~ CN(0,1); C = 0.7 A + N1; B = 1.3 C + N2.
    MatrixXcd coef(3, 3);
    coef << 1, 0, 0, 0.7, 1, 0, 0.91, 1.3, 1;
    const MatrixXcd base = diag({1.0, 0.5, 0.25});
    const MatrixXcd abc = coef * base * coef.adjoint();
    CHECK(std::abs(conditional_mutual_info(abc, idx{0}, idx{2}, idx{1}, Clamp::no)) < 1e-9);
  }

  SUBCASE("chain rule") {
    for (int i = 0; i < 100; ++i) {
      const MatrixXcd r = testing::random_psd(6, 6, rng);
      const double lhs = conditional_mutual_info(r, idx{0}, idx{1, 2}, idx{3}, Clamp::no);
      const double rhs = conditional_mutual_info(r, idx{0}, idx{1}, idx{3}, Clamp::no) +
                         conditional_mutual_info(r, idx{0}, idx{2}, idx{3, 1}, Clamp::no);
      CHECK(std::abs(lhs - rhs) < 1e-9);
      CHECK(conditional_mutual_info(r, idx{0, 4}, idx{5}, idx{1, 2}) ==
            doctest::Approx(testing::oracle_cmi(r, {0, 4}, {5}, {1, 2})).epsilon(1e-9));
    }
  }

  CHECK_THROWS_AS(conditional_mutual_info(q, idx{0}, idx{1}, idx{1}), std::invalid_argument);
  CHECK_THROWS_AS(conditional_mutual_info(q, idx{}, idx{1}, idx{}), std::invalid_argument);
}

TEST_CASE("bundle information properties") {
  std::mt19937_64 rng(12);
  for (int inst = 0; inst < 200; ++inst) {
    const auto t = testing::random_typical(2, rng);
    const MatrixXcd qz = testing::random_psd(3, 4, rng);
    const auto b = build_bundle(1.0, 0.1, qz, 1e-3, relay_gain_matrix(t, idx{0, 1}), idx{0, 1});
    const idx xs{b.x_source()};
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(mutual_info(b.qv, xs, idx{b.y_hat(j)}) <=
            mutual_info(b.qv, xs, idx{b.y_relay(j)}) + 1e-12);
    }
    const double base = mutual_info(b.qv, xs, idx{b.y_dest()});
    const double with1 = mutual_info(b.qv, idx{b.x_source(), b.x_relay(0)}, idx{b.y_dest()});
    const double with2 =
        mutual_info(b.qv, idx{b.x_source(), b.x_relay(0), b.x_relay(1)}, idx{b.y_dest()});
    CHECK(with1 >= base - 1e-12);
    CHECK(with2 >= with1 - 1e-12);
  }
}

TEST_CASE("memoizing evaluator agrees with the direct functions") {
  std::mt19937_64 rng(13);
  const MatrixXcd q = testing::random_psd(5, 5, rng);
  InfoEvaluator eval(q);
  const double direct = conditional_mutual_info(q, idx{0, 1}, idx{2}, idx{4});
  CHECK(eval.conditional_mutual_info(VarSet{0, 1}, VarSet{2}, VarSet{4}) == doctest::Approx(direct));
  CHECK(eval.conditional_mutual_info(VarSet{0, 1}, VarSet{2}, VarSet{4}) == doctest::Approx(direct));
  CHECK(eval.log2_det(VarSet{}) == 0.0);
}
