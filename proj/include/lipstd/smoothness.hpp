#pragma once

#include <vector>

#include "lipstd/expfam.hpp"

namespace lipstd::smoothness {

/// Local Lipschitz constants of the log-likelihood gradient per natural
/// parameter, evaluated at one parameter point: L_i = sum_j |d2/(d eta_j d
/// eta_i)| with total = sum_i L_i.
struct SmoothnessEstimate {
    std::vector<double> per_param;
    double total = 0.0;
    expfam::NaturalParams at_params;
};

/// Signed second-derivative matrix (row-major I x I) underlying the local
/// constants, in closed form per family.
std::vector<double> hessian(expfam::Family family, const expfam::NaturalParams& nat);

/// Closed-form local estimate at nat. Continuous families only.
SmoothnessEstimate estimate(expfam::Family family, const expfam::NaturalParams& nat);

/// Independent oracle: central finite differences (with Richardson
/// extrapolation) of the same per-parameter gradient expressions the closed
/// forms differentiate. Agrees with estimate() within ~1e-5 relative away from
/// the natural-domain boundaries.
SmoothnessEstimate estimate_fd(expfam::Family family, const expfam::NaturalParams& nat);

/// Applies the family's unit-variance scaling to the parameters, then
/// estimates; reproduces the standardized-smoothness anchors (exponential 1,
/// Rayleigh (2/(4-pi))^2, centered normal 3, gamma L2 = 1 + 1/sqrt(alpha)).
SmoothnessEstimate smoothness_after_standardization(expfam::Family family,
                                                    const expfam::CanonicalParams& canon);

}  // namespace lipstd::smoothness
