#include "lipstd/special.hpp"

#include <cmath>
#include <string>

#include "lipstd/error.hpp"

namespace lipstd {

namespace {

constexpr double kHalfLog2Pi = 0.91893853320467274178;  // log(2*pi)/2

void check_positive(double x, const char* fn) {
    if (!(x > 0.0)) {
        throw Error(errc::invalid_parameter, std::string(fn) + ": argument must be positive, got " + std::to_string(x));
    }
}

}  // namespace

double log_gamma(double x) {
    check_positive(x, "log_gamma");
    // Shift to x >= 10 where the Stirling series converges fast.
    double shift = 0.0;
    while (x < 10.0) {
        shift -= std::log(x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    // Bernoulli-number coefficients B_{2n} / (2n (2n-1)).
    double series = inv *
                    (1.0 / 12.0 +
                     inv2 * (-1.0 / 360.0 +
                             inv2 * (1.0 / 1260.0 +
                                     inv2 * (-1.0 / 1680.0 +
                                             inv2 * (1.0 / 1188.0 + inv2 * (-691.0 / 360360.0))))));
    return shift + (x - 0.5) * std::log(x) - x + kHalfLog2Pi + series;
}

double digamma(double x) {
    check_positive(x, "digamma");
    double shift = 0.0;
    while (x < 10.0) {
        shift -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = inv2 * (1.0 / 12.0 +
                            inv2 * (-1.0 / 120.0 +
                                    inv2 * (1.0 / 252.0 +
                                            inv2 * (-1.0 / 240.0 +
                                                    inv2 * (1.0 / 132.0 + inv2 * (-691.0 / 32760.0))))));
    return shift + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
    check_positive(x, "trigamma");
    double shift = 0.0;
    while (x < 10.0) {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    double series = 1.0 +
                    inv * 0.5 +
                    inv2 * (1.0 / 6.0 +
                            inv2 * (-1.0 / 30.0 +
                                    inv2 * (1.0 / 42.0 +
                                            inv2 * (-1.0 / 30.0 +
                                                    inv2 * (5.0 / 66.0 + inv2 * (-691.0 / 2730.0))))));
    return shift + inv * series;
}

}  // namespace lipstd
