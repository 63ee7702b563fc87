#include <doctest.h>

#include <cmath>
#include <limits>

#include "lipstd/error.hpp"
#include "lipstd/special.hpp"

using namespace lipstd;

namespace {

// High-precision reference values (mpmath, 30 significant digits).
struct Ref {
    double x;
    double digamma;
    double trigamma;
    double log_gamma;
};

constexpr Ref kRefs[] = {
    {0.001, -1000.5755719318103005, 1000001.642533195869, 6.9071788853838536825},
    {0.01, -100.5608854578686745, 10001.62121352831322, 4.5994798780420217225},
    {0.1, -10.423754940411076795, 101.43329915079275882, 2.2527126517342059599},
    {0.5, -1.9635100260214234794, 4.9348022005446793094, 0.57236494292470008707},
    {1.0, -0.57721566490153286061, 1.6449340668482264365, 0.0},
    {1.1, -0.42375494041107679517, 1.4332991507927588172, -0.049872441259839724148},
    {1.5, 0.036489973978576520559, 0.93480220054467930942, -0.12078223763524522235},
    {2.0, 0.42278433509846713939, 0.64493406684822643647, 0.0},
    {3.25, 1.0169909110681790364, 0.35979829030957987507, 0.93580193110872535826},
    {4.0, 1.2561176684318004727, 0.28382295573711532536, 1.7917594692280550008},
    {7.5, 1.9467574842460867881, 0.14261589669670379977, 7.5343642367587329552},
    {10.0, 2.2517525890667211076, 0.10516633568168574612, 12.801827480081469611},
    {31.1, 3.4210444992011894661, 0.032676831246033095471, 75.000177236356071681},
    {100.0, 4.6001618527380874002, 0.010050166663333571395, 359.13420536957539878},
    {1000.0, 6.9072551956488120521, 0.0010005001666666333334, 5905.2204232091812118},
    {1e6, 13.815510057964190771, 1.0000005000001666667e-6, 12815504.56914761166},
};

// 1e-10 absolute, relaxed to a few ulp where the value itself is so large
// that 1e-10 is below representation granularity.
double tol_for(double reference) {
    const double ulp = std::nextafter(std::abs(reference), std::numeric_limits<double>::infinity()) -
                       std::abs(reference);
    return std::max(1e-10, 4.0 * ulp);
}

}  // namespace

TEST_SUITE("special") {
    TEST_CASE("matches high-precision references over [1e-3, 1e6]") {
        for (const Ref& r : kRefs) {
            CAPTURE(r.x);
            CHECK(std::abs(digamma(r.x) - r.digamma) <= tol_for(r.digamma));
            CHECK(std::abs(trigamma(r.x) - r.trigamma) <= tol_for(r.trigamma));
            CHECK(std::abs(log_gamma(r.x) - r.log_gamma) <= tol_for(r.log_gamma));
        }
    }

    TEST_CASE("known closed-form values") {
        CHECK(trigamma(1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));  // pi^2/6
        CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));  // -gamma
        // Recurrence from trigamma(1): pi^2/6 - 1 - 1/4 - 1/9.
        CHECK(trigamma(4.0) ==
              doctest::Approx(1.6449340668482264 - 1.0 - 0.25 - 1.0 / 9.0).epsilon(1e-12));
        CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(3.14159265358979323846)).epsilon(1e-13));
        CHECK(log_gamma(6.0) == doctest::Approx(std::log(120.0)).epsilon(1e-13));
    }

    TEST_CASE("recurrence identities hold across the shift boundary") {
        for (double x : {0.002, 0.37, 1.9, 9.7, 12.5, 347.0}) {
            CAPTURE(x);
            CHECK(digamma(x + 1.0) == doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-11));
            CHECK(trigamma(x + 1.0) == doctest::Approx(trigamma(x) - 1.0 / (x * x)).epsilon(1e-11));
            CHECK(log_gamma(x + 1.0) == doctest::Approx(log_gamma(x) + std::log(x)).epsilon(1e-12));
        }
    }

    TEST_CASE("rejects non-positive arguments") {
        CHECK_THROWS_AS(digamma(0.0), Error);
        CHECK_THROWS_AS(trigamma(-1.0), Error);
        CHECK_THROWS_AS(log_gamma(-0.5), Error);
    }
}
