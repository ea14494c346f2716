#pragma once

namespace fdrelay {

/// Direct transmission through a Poisson field of sources without relays.
struct DtParams {
  double lambda_s = 1e-4;
  double rate = 1.0;
  double alpha = 4.0;
  double distance = 10.0;
};

/// (2 pi / alpha) Gamma(2/alpha) Gamma(1 - 2/alpha); diverges as alpha -> 2.
/// Throws std::domain_error for alpha <= 2.
double constant_c(double alpha);

/// 1 - exp(-lambda_s C (2^R - 1)^{2/alpha} distance^2).
double dt_outage_closed_form(const DtParams& params);

}  // namespace fdrelay
