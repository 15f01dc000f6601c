#pragma once

namespace copdes {

// Standard normal density.
double norm_pdf(double z);

// Standard normal CDF, absolute error below 1e-15 (erfc-based).
double norm_cdf(double z);

// Inverse standard normal CDF on (0, 1). Rational initial guess refined by
// one Halley step against norm_cdf; absolute error ~1e-15 over the full
// representable range. Returns +/-inf at the endpoints.
double norm_quantile(double p);

// Bivariate standard normal CDF P(X <= h, Y <= k) with correlation rho,
// |rho| <= 1. Port of Genz's BVND rewrite of the Drezner-Wesolowsky method;
// absolute accuracy around 5e-16.
double bvn_cdf(double h, double k, double rho);

// Bivariate standard normal density.
double bvn_pdf(double z1, double z2, double rho);

}  // namespace copdes
