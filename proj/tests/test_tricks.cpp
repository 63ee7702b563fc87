#include <doctest.h>

#include <cmath>
#include <vector>

#include "lipstd/tricks.hpp"
#include "test_support.hpp"

using namespace lipstd;
using namespace lipstd::tricks;
using test_support::rel_err;

TEST_SUITE("tricks") {
    TEST_CASE("one-hot expansion of a categorical column") {
        const std::vector<double> col = {0.0, 2.0, 1.0};
        const BernoulliTrickResult r = apply_bernoulli_trick(col, {}, 3);
        CHECK(r.columns[0] == std::vector<double>{1.0, 0.0, 0.0});
        CHECK(r.columns[1] == std::vector<double>{0.0, 0.0, 1.0});
        CHECK(r.columns[2] == std::vector<double>{0.0, 1.0, 0.0});
    }

    TEST_CASE("missing entries are missing in every expanded column") {
        const std::vector<double> col = {1.0, 0.0};
        const std::vector<std::uint8_t> present = {1, 0};
        const BernoulliTrickResult r = apply_bernoulli_trick(col, present, 2);
        CHECK(r.present[0] == std::vector<std::uint8_t>{1, 0});
        CHECK(r.present[1] == std::vector<std::uint8_t>{1, 0});
        CHECK(r.columns[0][0] == 0.0);
        CHECK(r.columns[1][0] == 1.0);
    }

    TEST_CASE("out-of-range category raises invalid-category") {
        const std::vector<double> col = {7.0};
        CHECK_THROWS_AS(apply_bernoulli_trick(col, {}, 4), Error);
        const std::vector<double> frac = {0.5};
        CHECK_THROWS_AS(apply_bernoulli_trick(frac, {}, 4), Error);
    }

    TEST_CASE("gamma trick keeps zero counts inside (0,1)") {
        const std::vector<double> zeros(64, 0.0);
        NoiseConfig noise;
        noise.seed = 5;
        const GammaTrickResult r = apply_gamma_trick(zeros, {}, noise);
        for (double v : r.values) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }

    TEST_CASE("noised values keep the original count recoverable via floor") {
        Rng rng(9);
        std::vector<double> counts(5000);
        for (double& v : counts) v = static_cast<double>(rng.poisson(4.0));
        NoiseConfig noise;
        noise.seed = 10;
        const GammaTrickResult r = apply_gamma_trick(counts, {}, noise);
        for (std::size_t i = 0; i < counts.size(); ++i) {
            CHECK(std::floor(r.values[i]) == counts[i]);
        }
    }

    TEST_CASE("constant-5 column: fitted gamma mean lands at 5 + E[noise]") {
        const std::vector<double> fives(10000, 5.0);
        NoiseConfig noise;
        noise.seed = 11;
        const GammaTrickResult r = apply_gamma_trick(fives, {}, noise);
        const double mean = r.gamma_fit.values[0] / r.gamma_fit.values[1];
        CHECK(std::abs(mean - 5.035) < 0.01);
    }

    TEST_CASE("same seed gives bit-identical noised columns") {
        const std::vector<double> col = {0.0, 3.0, 1.0, 2.0, 0.0};
        NoiseConfig noise;
        noise.seed = 77;
        const GammaTrickResult a = apply_gamma_trick(col, {}, noise);
        const GammaTrickResult b = apply_gamma_trick(col, {}, noise);
        CHECK(a.values == b.values);
    }

    TEST_CASE("missing entries receive no noise and stay missing") {
        const std::vector<double> col = {1.0, 2.0, 3.0, 1.0};
        const std::vector<std::uint8_t> present = {1, 0, 1, 1};
        NoiseConfig noise;
        noise.seed = 3;
        const GammaTrickResult r = apply_gamma_trick(col, present, noise);
        CHECK(r.present == present);
        CHECK(r.values[1] == 2.0);  // untouched
    }

    TEST_CASE("non-integer or negative values raise invalid-count") {
        NoiseConfig noise;
        CHECK_THROWS_AS(apply_gamma_trick(std::vector<double>{1.5}, {}, noise), Error);
        CHECK_THROWS_AS(apply_gamma_trick(std::vector<double>{-1.0}, {}, noise), Error);
    }

    TEST_CASE("bernoulli mean matching") {
        NoiseConfig noise;  // E[eps] = 1.1/31.1
        // alpha/beta = 0.535.
        CHECK(recover_bernoulli(expfam::CanonicalParams{{0.535, 1.0}}, noise) ==
              doctest::Approx(0.535 - 1.1 / 31.1).epsilon(1e-12));
        CHECK(recover_bernoulli(expfam::CanonicalParams{{0.01, 1.0}}, noise) == 0.0);
        CHECK(recover_bernoulli(expfam::CanonicalParams{{1.2, 1.0}}, noise) == 1.0);
    }

    TEST_CASE("poisson mean matching floors at delta") {
        NoiseConfig noise;
        CHECK(recover_poisson(expfam::CanonicalParams{{3.035, 1.0}}, noise) ==
              doctest::Approx(3.035 - 1.1 / 31.1).epsilon(1e-12));
        CHECK(recover_poisson(expfam::CanonicalParams{{0.01, 1.0}}, noise, 1e-6) == 1e-6);
        // Mean exactly at the noise expectation: floored.
        CHECK(recover_poisson(expfam::CanonicalParams{{1.1 / 31.1, 1.0}}, noise, 1e-6) == 1e-6);
        CHECK_THROWS_AS(recover_poisson(expfam::CanonicalParams{{1.0, 1.0}}, noise, 0.0), Error);
    }

    TEST_CASE("categorical recovery normalizes class means") {
        const std::vector<double> a = {0.2, 0.2, 0.6};
        CHECK(recover_categorical(a).pi == a);
        const std::vector<double> b = {1.0, 1.0};
        CHECK(recover_categorical(b).pi == std::vector<double>{0.5, 0.5});
        const std::vector<double> c = {0.3, 0.1, 0.2};
        const auto rc = recover_categorical(c);
        CHECK(rc.pi[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(rc.pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
        CHECK(rc.pi[2] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(!rc.degenerate);
    }

    TEST_CASE("categorical recovery is invariant to a common positive rescaling") {
        Rng rng(21);
        for (int i = 0; i < 100; ++i) {
            std::vector<double> means(4);
            for (double& m : means) m = rng.uniform();
            const double scale = 0.01 + 10.0 * rng.uniform();
            std::vector<double> scaled = means;
            for (double& m : scaled) m *= scale;
            const auto p = recover_categorical(means).pi;
            const auto q = recover_categorical(scaled).pi;
            for (int k = 0; k < 4; ++k) {
                CHECK(rel_err(q[k], p[k]) < 1e-12);
            }
        }
        double sum = 0.0;
        for (double v : recover_categorical(std::vector<double>{0.3, 0.1, 0.2}).pi) sum += v;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }

    TEST_CASE("all-zero class means fall back to uniform with the degenerate flag") {
        const auto r = recover_categorical(std::vector<double>{0.0, 0.0, 0.0});
        CHECK(r.degenerate);
        CHECK(r.pi == std::vector<double>{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    }

    TEST_CASE("zero-parameter cells recover near zero") {
        const std::vector<double> grid = {0.0};
        const double err = end_to_end_recovery_error(DiscreteKind::Bernoulli, grid, 10000, 4242);
        CHECK(err <= 0.05);
    }

    TEST_CASE("count columns with all values >= 1 fit a gamma shape above 1") {
        Rng rng(31);
        std::vector<double> counts(5000);
        for (double& v : counts) v = 1.0 + static_cast<double>(rng.poisson(3.0));
        NoiseConfig noise;
        noise.seed = 32;
        const GammaTrickResult r = apply_gamma_trick(counts, {}, noise);
        CHECK(r.gamma_fit.values[0] > 1.0);
    }
}
