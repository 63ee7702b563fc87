#pragma once

namespace lipstd {

// Real-argument special functions for x > 0, used by the Gamma-type families.
// Recurrence shift into the asymptotic regime plus a Stirling-type series;
// absolute error <= 1e-10 over [1e-3, 1e6] (or a few ulp where the value
// itself exceeds 1e6). Throws Error(errc::invalid_parameter) for x <= 0.

double log_gamma(double x);
double digamma(double x);
double trigamma(double x);

}  // namespace lipstd
