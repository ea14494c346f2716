#include "fdrelay/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fdrelay {

double constant_c(double alpha) {
  if (!(alpha > 2.0) || !std::isfinite(alpha)) {
    throw std::domain_error("path loss exponent must exceed 2");
  }
  const double delta = 2.0 / alpha;
  return 2.0 * std::numbers::pi / alpha * std::tgamma(delta) * std::tgamma(1.0 - delta);
}

double dt_outage_closed_form(const DtParams& params) {
  if (params.lambda_s < 0.0 || params.rate < 0.0 || params.distance < 0.0) {
    throw std::domain_error("density, rate and distance must be non-negative");
  }
  const double t = std::exp2(params.rate) - 1.0;
  const double exponent = params.lambda_s * constant_c(params.alpha) *
                          std::pow(t, 2.0 / params.alpha) * params.distance * params.distance;
  return -std::expm1(-exponent);
}

}  // namespace fdrelay
