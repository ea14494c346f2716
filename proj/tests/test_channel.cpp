#include <doctest.h>

#include <cmath>

#include "fdrelay/channel.hpp"
#include "support.hpp"

using namespace fdrelay;

TEST_CASE("path loss") {
  CHECK(path_loss({0, 0}, {1, 0}, 4.0) == doctest::Approx(1.0));
  CHECK(path_loss({0, 0}, {0, 10}, 4.0) == doctest::Approx(1e-4));
  CHECK(path_loss({1, 1}, {1, 3}, 4.0) == doctest::Approx(0.0625));
  CHECK(path_loss({0, 0}, {2, 0}, 3.0) == doctest::Approx(0.125));
  CHECK_THROWS_AS(path_loss({1, 2}, {1, 2}, 4.0), SingularPathLoss);
}

TEST_CASE("fading statistics") {
  Rng rng(11);
  const int n = 100000;
  std::vector<double> power;
  double sum = 0, re2 = 0, im2 = 0;
  for (int i = 0; i < n; ++i) {
    const cplx h = sample_fading(rng);
    power.push_back(std::norm(h));
    sum += std::norm(h);
    re2 += h.real() * h.real();
    im2 += h.imag() * h.imag();
  }
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(re2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(im2 / n == doctest::Approx(0.5).epsilon(0.02));
  CHECK(testing::ks_pvalue(power, [](double x) { return 1.0 - std::exp(-x); }) > 0.01);
}

namespace {

NetworkGeometry small_network(std::size_t n_r, std::size_t interferers) {
  NetworkGeometry g;
  g.window_radius = 100;
  g.typical.source = {-10, 0};
  g.typical.destination = {0, 0};
  g.typical.center = {-5, 0};
  for (std::size_t i = 0; i < n_r; ++i) g.typical.relays.push_back({-5.0 + i, 1.0 + i});
  for (std::size_t x = 0; x < interferers; ++x) {
    ClusterGeometry c;
    c.source = {20.0 + 3 * x, 7.0};
    c.destination = {30.0 + 3 * x, 7.0};
    c.center = {25.0 + 3 * x, 7.0};
    for (std::size_t i = 0; i < n_r; ++i) c.relays.push_back({25.0 + 3 * x, 8.0 + i});
    g.interferers.push_back(c);
  }
  return g;
}

}  // namespace

TEST_CASE("channel realization") {
  SUBCASE("zero interferers leaves only typical links") {
    Rng rng(1);
    const auto ch = realize_channels(small_network(2, 0), 4.0, true, rng);
    CHECK(ch.interferers.empty());
    CHECK(ch.typical.source_to_relay.size() == 2);
    CHECK(ch.typical.relay_to_relay.rows() == 2);
    CHECK(ch.typical.relay_to_relay(0, 0) == cplx{});
    CHECK(ch.typical.relay_to_relay(0, 1) != cplx{});
  }

  SUBCASE("shapes with interferers") {
    Rng rng(1);
    auto ch = realize_channels(small_network(3, 4), 4.0, false, rng);
    REQUIRE(ch.interferers.size() == 4);
    CHECK(ch.interferers[0].to_typical.rows() == 4);
    CHECK(ch.interferers[0].to_typical.cols() == 4);
    CHECK(ch.interferers[0].source_to_own_relay.size() == 0);
    Rng rng2(1);
    ch = realize_channels(small_network(3, 4), 4.0, true, rng2);
    CHECK(ch.interferers[3].source_to_own_relay.size() == 3);
    CHECK(ch.interferers[3].own_relay_to_dest.size() == 3);
  }

  SUBCASE("mean direct-link power equals the path loss") {
    const auto g = small_network(1, 1);
    Rng rng(4);
    const int n = 100000;
    double sd = 0.0, xd = 0.0, sr = 0.0, xr = 0.0, cross = 0.0;
    for (int i = 0; i < n; ++i) {
      const auto ch = realize_channels(g, 4.0, false, rng);
      const double a = std::norm(ch.typical.source_to_dest) / path_loss(g.typical.source, {0, 0}, 4.0);
      const double b = std::norm(ch.interferers[0].to_typical(0, 1)) /
                       path_loss(g.interferers[0].source, {0, 0}, 4.0);
      sd += a;
      xd += b;
      sr += a * a;
      xr += b * b;
      cross += a * b;
    }
    CHECK(sd / n == doctest::Approx(1.0).epsilon(0.02));
    CHECK(xd / n == doctest::Approx(1.0).epsilon(0.02));
    const double ma = sd / n, mb = xd / n;
    const double corr = (cross / n - ma * mb) /
                        std::sqrt((sr / n - ma * ma) * (xr / n - mb * mb));
    CHECK(std::abs(corr) < 0.02);
  }

  SUBCASE("deterministic per seed") {
    const auto g = small_network(2, 3);
    Rng a(8), b(8);
    const auto c1 = realize_channels(g, 4.0, true, a);
    const auto c2 = realize_channels(g, 4.0, true, b);
    CHECK(c1.typical.relay_to_relay == c2.typical.relay_to_relay);
    CHECK(c1.interferers[2].to_typical == c2.interferers[2].to_typical);
    CHECK(c1.interferers[2].own_relay_to_dest == c2.interferers[2].own_relay_to_dest);
  }

  SUBCASE("coincident nodes propagate the error") {
    auto g = small_network(1, 0);
    g.typical.relays[0] = g.typical.source;
    Rng rng(1);
    CHECK_THROWS_AS(realize_channels(g, 4.0, false, rng), SingularPathLoss);
  }
}
