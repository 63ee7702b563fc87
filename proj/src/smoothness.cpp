#include "lipstd/smoothness.hpp"

#include <cmath>
#include <limits>

#include "lipstd/special.hpp"

namespace lipstd::smoothness {

using expfam::Family;
using expfam::FamilyKind;
using expfam::NaturalParams;

namespace {

void require_continuous(Family family) {
    if (family.is_discrete()) {
        throw Error(errc::unsupported_family,
                    family.name() + " has no data-scaling smoothness; apply a trick first");
    }
}

SmoothnessEstimate from_hessian(Family family, const NaturalParams& nat,
                                const std::vector<double>& h) {
    const int n = family.param_count();
    SmoothnessEstimate est;
    est.at_params = nat;
    est.per_param.assign(n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            est.per_param[i] += std::abs(h[i * n + j]);
        }
        est.total += est.per_param[i];
    }
    return est;
}

// Per-parameter gradient expressions of the log-partition that the closed-form
// second derivatives differentiate. For Gamma and InverseGamma the first
// component is the entropy-form expectation that estimate()'s L1 is based on,
// so the finite-difference oracle checks exactly the implemented constants.
std::vector<double> grad_components(Family family, const NaturalParams& nat) {
    const auto& e = nat.values;
    switch (family.kind) {
        case FamilyKind::Gamma: {
            const double alpha = e[0] + 1.0;
            const double beta = -e[1];
            return {alpha - std::log(beta) + log_gamma(alpha) + (1.0 - alpha) * digamma(alpha),
                    alpha / beta};
        }
        case FamilyKind::InverseGamma: {
            const double alpha = -e[0] - 1.0;
            const double beta = -e[1];
            return {alpha - std::log(beta) + log_gamma(alpha) - (1.0 + alpha) * digamma(alpha),
                    (e[0] + 1.0) / e[1]};
        }
        default:
            return expfam::log_partition_grad(family, nat);
    }
}

}  // namespace

std::vector<double> hessian(Family family, const NaturalParams& nat) {
    require_continuous(family);
    expfam::validate_natural(family, nat);
    const expfam::CanonicalParams canon = expfam::from_natural(family, nat);
    const auto& t = canon.values;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal: {
            const double mu = t[0];
            const double s2 = t[1];
            const double h12 = 2.0 * mu * s2;
            return {s2, h12, h12, 2.0 * s2 * (s2 + 2.0 * mu * mu)};
        }
        case FamilyKind::Gamma: {
            const double alpha = t[0];
            const double beta = t[1];
            return {1.0 + (1.0 - alpha) * trigamma(alpha), 1.0 / beta, 1.0 / beta, alpha / (beta * beta)};
        }
        case FamilyKind::InverseGaussian: {
            const double mu = t[0];
            const double lambda = t[1];
            return {mu * mu * mu / lambda, -mu / lambda, -mu / lambda,
                    (2.0 * mu + lambda) / (mu * lambda * lambda)};
        }
        case FamilyKind::InverseGamma: {
            const double alpha = t[0];
            const double beta = t[1];
            return {-1.0 + (alpha + 1.0) * trigamma(alpha), -1.0 / beta, -1.0 / beta,
                    alpha / (beta * beta)};
        }
        case FamilyKind::Exponential: {
            const double lambda = t[0];
            return {1.0 / (lambda * lambda)};
        }
        case FamilyKind::Rayleigh: {
            const double sigma = t[0];
            return {sigma * sigma * sigma * sigma};
        }
        default:
            throw Error(errc::unsupported_family, family.name() + " smoothness is undefined");
    }
}

SmoothnessEstimate estimate(Family family, const NaturalParams& nat) {
    return from_hessian(family, nat, hessian(family, nat));
}

SmoothnessEstimate estimate_fd(Family family, const NaturalParams& nat) {
    require_continuous(family);
    expfam::validate_natural(family, nat);
    const int n = family.param_count();
    const expfam::NaturalBounds bounds = expfam::natural_domain(family);

    std::vector<double> h(n * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double step = 1e-4 * std::max(std::abs(nat.values[j]), 1.0);
        // Keep the evaluation stencil well inside the natural domain.
        const double dist = std::min(nat.values[j] - bounds.lo[j], bounds.hi[j] - nat.values[j]);
        int shrink = 0;
        while (10.0 * step > dist && shrink < 8) {
            step *= 0.5;
            ++shrink;
        }
        if (10.0 * step > dist) {
            throw Error(errc::step_underflow,
                        family.name() + ": eta" + std::to_string(j + 1) +
                            " too close to the natural-domain boundary for finite differences");
        }
        auto central = [&](double hh) {
            NaturalParams plus = nat;
            NaturalParams minus = nat;
            plus.values[j] += hh;
            minus.values[j] -= hh;
            const std::vector<double> gp = grad_components(family, plus);
            const std::vector<double> gm = grad_components(family, minus);
            std::vector<double> d(n);
            for (int i = 0; i < n; ++i) {
                d[i] = (gp[i] - gm[i]) / (2.0 * hh);
            }
            return d;
        };
        const std::vector<double> d1 = central(step);
        const std::vector<double> d2 = central(step / 2.0);
        for (int i = 0; i < n; ++i) {
            h[i * n + j] = (4.0 * d2[i] - d1[i]) / 3.0;  // Richardson extrapolation
        }
    }
    return from_hessian(family, nat, h);
}

SmoothnessEstimate smoothness_after_standardization(Family family,
                                                    const expfam::CanonicalParams& canon) {
    require_continuous(family);
    const double var = expfam::family_variance(family, canon);
    if (!(var > 0.0) || !std::isfinite(var)) {
        throw Error(errc::invalid_parameter, family.name() + ": variance must be positive and finite");
    }
    const double omega = 1.0 / std::sqrt(var);
    const NaturalParams nat = expfam::to_natural(family, canon);
    return estimate(family, expfam::scale_natural(family, nat, omega));
}

}  // namespace lipstd::smoothness
