#pragma once

#include <cstddef>
#include <vector>

#include "fdrelay/random.hpp"

namespace fdrelay {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double squared_distance(Point a, Point b);
double distance(Point a, Point b);

/// A source, its destination and its potential relays. `relays` is ordered by
/// increasing distance to `center`.
struct ClusterGeometry {
  Point source;
  Point destination;
  Point center;
  std::vector<Point> relays;

  friend bool operator==(const ClusterGeometry&, const ClusterGeometry&) = default;
};

/// One spatial snapshot. The typical destination sits at the origin and its
/// source at (-D, 0); interferer sources lie inside the window disc.
struct NetworkGeometry {
  ClusterGeometry typical;
  std::vector<ClusterGeometry> interferers;
  double window_radius = 0.0;

  friend bool operator==(const NetworkGeometry&, const NetworkGeometry&) = default;
};

struct NetworkParams {
  double lambda_s = 1e-4;
  double distance = 10.0;  // source-destination distance D
  double epsilon = 0.5;
  std::size_t n_r = 1;
  double lambda_r = 5e-2;
  double window_radius = 1000.0;
};

/// source + epsilon * (destination - source); epsilon must lie in [0, 1].
Point cluster_center(Point source, Point destination, double epsilon);

/// The n_r points of a PPP of intensity lambda_r nearest to `center`, sorted
/// by distance. Squared distances are the arrival times of a 1-D PPP of rate
/// lambda_r * pi and phases are uniform, so no 2-D process is drawn.
std::vector<Point> sample_relays(Point center, std::size_t n_r, double lambda_r, Rng& rng);

/// Samples the typical cluster and the interferer field. Sources and relays
/// come from separate streams so that sweeping lambda_r or n_r leaves the
/// source positions untouched.
NetworkGeometry sample_network(const NetworkParams& params, Rng& source_rng, Rng& relay_rng);
NetworkGeometry sample_network(const NetworkParams& params, Rng& rng);

}  // namespace fdrelay
