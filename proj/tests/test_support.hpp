#pragma once

#include <cmath>
#include <vector>

#include "lipstd/expfam.hpp"
#include "lipstd/rng.hpp"

namespace test_support {

using lipstd::Rng;
using lipstd::expfam::CanonicalParams;
using lipstd::expfam::Family;
using lipstd::expfam::FamilyKind;

inline std::vector<Family> continuous_families() {
    return {Family(FamilyKind::Normal),         Family(FamilyKind::LogNormal),
            Family(FamilyKind::Gamma),          Family(FamilyKind::InverseGaussian),
            Family(FamilyKind::InverseGamma),   Family(FamilyKind::Exponential),
            Family(FamilyKind::Rayleigh)};
}

inline double uniform_in(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

// Moderate parameter ranges: valid, away from natural-domain boundaries, with
// well-conditioned second derivatives.
inline CanonicalParams random_canonical(Family family, Rng& rng) {
    CanonicalParams c;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            c.values = {uniform_in(rng, -3.0, 3.0), uniform_in(rng, 0.3, 4.0)};
            break;
        case FamilyKind::Gamma:
            c.values = {uniform_in(rng, 1.2, 8.0), uniform_in(rng, 0.4, 4.0)};
            break;
        case FamilyKind::InverseGaussian:
            c.values = {uniform_in(rng, 0.5, 4.0), uniform_in(rng, 0.5, 5.0)};
            break;
        case FamilyKind::InverseGamma:
            c.values = {uniform_in(rng, 3.0, 9.0), uniform_in(rng, 0.5, 5.0)};
            break;
        case FamilyKind::Exponential:
            c.values = {uniform_in(rng, 0.2, 5.0)};
            break;
        case FamilyKind::Rayleigh:
            c.values = {uniform_in(rng, 0.3, 4.0)};
            break;
        case FamilyKind::Bernoulli:
            c.values = {uniform_in(rng, 0.05, 0.95)};
            break;
        case FamilyKind::Poisson:
            c.values = {uniform_in(rng, 0.2, 20.0)};
            break;
        case FamilyKind::Categorical: {
            double sum = 0.0;
            for (int k = 0; k < family.k; ++k) {
                c.values.push_back(uniform_in(rng, 0.1, 1.0));
                sum += c.values.back();
            }
            for (double& v : c.values) v /= sum;
            break;
        }
    }
    return c;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace test_support
