#include "fdrelay/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fdrelay {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ClusterGeometry make_cluster(Point source, Point destination, const NetworkParams& params,
                             Rng& relay_rng) {
  ClusterGeometry c;
  c.source = source;
  c.destination = destination;
  c.center = cluster_center(source, destination, params.epsilon);
  c.relays = sample_relays(c.center, params.n_r, params.lambda_r, relay_rng);
  return c;
}

}  // namespace

double squared_distance(Point a, Point b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

double distance(Point a, Point b) { return std::sqrt(squared_distance(a, b)); }

Point cluster_center(Point source, Point destination, double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in [0, 1], got " + std::to_string(epsilon));
  }
  return {source.x + epsilon * (destination.x - source.x),
          source.y + epsilon * (destination.y - source.y)};
}

std::vector<Point> sample_relays(Point center, std::size_t n_r, double lambda_r, Rng& rng) {
  if (!(lambda_r > 0.0)) {
    throw std::invalid_argument("lambda_r must be positive");
  }
  // Unit-rate gaps scaled afterwards: the same draws serve every lambda_r.
  std::exponential_distribution<double> gap(1.0);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double rate = lambda_r * std::numbers::pi;

  std::vector<Point> relays;
  relays.reserve(n_r);
  double arrival = 0.0;
  for (std::size_t k = 0; k < n_r; ++k) {
    arrival += gap(rng);
    const double r = std::sqrt(arrival / rate);
    const double theta = phase(rng);
    relays.push_back({center.x + r * std::cos(theta), center.y + r * std::sin(theta)});
  }
  return relays;
}

NetworkGeometry sample_network(const NetworkParams& params, Rng& source_rng, Rng& relay_rng) {
  if (!(params.lambda_s > 0.0) || !(params.lambda_r > 0.0)) {
    throw std::invalid_argument("intensities must be positive");
  }
  if (!(params.window_radius >= 0.0)) {
    throw std::invalid_argument("window_radius must be non-negative");
  }
  if (!(params.distance > 0.0)) {
    throw std::invalid_argument("source-destination distance must be positive");
  }

  NetworkGeometry net;
  net.window_radius = params.window_radius;
  net.typical = make_cluster({-params.distance, 0.0}, {0.0, 0.0}, params, relay_rng);

  const double mean = params.lambda_s * std::numbers::pi * params.window_radius * params.window_radius;
  std::size_t count = 0;
  if (mean > 0.0) {
    std::poisson_distribution<long long> poisson(mean);
    count = static_cast<std::size_t>(poisson(source_rng));
  }

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  net.interferers.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double r = params.window_radius * std::sqrt(unit(source_rng));
    const double theta = kTwoPi * unit(source_rng);
    const double heading = kTwoPi * unit(source_rng);
    const Point src{r * std::cos(theta), r * std::sin(theta)};
    const Point dst{src.x + params.distance * std::cos(heading),
                    src.y + params.distance * std::sin(heading)};
    net.interferers.push_back(make_cluster(src, dst, params, relay_rng));
  }
  return net;
}

NetworkGeometry sample_network(const NetworkParams& params, Rng& rng) {
  return sample_network(params, rng, rng);
}

}  // namespace fdrelay
