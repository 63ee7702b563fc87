#pragma once

#include <string>
#include <vector>

#include "lipstd/expfam.hpp"
#include "lipstd/frame.hpp"
#include "lipstd/smoothness.hpp"

namespace lipstd::scaler {

/// Common smoothness target L* shared by all columns; L* = 1/(D*alpha) when
/// derived from the practitioner learning rate.
struct ScalingTarget {
    double l_star = 1.0;
    double alpha = 1.0;
    int d_dims = 1;

    static ScalingTarget from_learning_rate(double alpha, int d_dims);
};

enum class SolveMethod { ClosedForm, Bisection };

struct ScalingResult {
    double omega = 1.0;
    smoothness::SmoothnessEstimate achieved;  // scaled-law constants at omega
    SolveMethod method = SolveMethod::ClosedForm;
    double residual = 0.0;
    bool infeasible = false;  // target below the attainable range; omega is best effort
    std::string warning;
};

/// Per-parameter constants of the scaled log-likelihood,
///   L~_i(omega) = |f_i(omega)| * sum_j |f_j(omega)| * L_i,
/// as a function of the unscaled local constants L_i. This is the objective
/// the per-family closed forms solve.
std::vector<double> scaled_constants(expfam::Family family,
                                     const smoothness::SmoothnessEstimate& base, double omega);
double scaled_total(expfam::Family family, const smoothness::SmoothnessEstimate& base,
                    double omega);

/// Solve scaled_total(omega) == l_star for the column's omega*. Closed forms
/// for Exponential / Gamma / (Log-)Normal, generic bracketed bisection
/// otherwise. A Gamma target with l_star <= L1 has no root; the result then
/// carries the best-effort minimizer with infeasible set.
ScalingResult solve_omega(expfam::Family family, const expfam::NaturalParams& nat,
                          const ScalingTarget& target);

/// Unique positive root of Q(w) = l2*w^4 + (l1+l2)*w^3 + l1*w^2 - l_star,
/// with |Q(root)| <= 1e-10 * l_star.
double solve_quartic_positive_root(double l1, double l2, double l_star);

enum class BaselineMethod { Std, Max, Iqr };

/// omega = 1/std (population), 1/max|x|, or 1/iqr of the present values.
/// Quantiles use linear interpolation at 0.25/0.75.
double baseline_omega(BaselineMethod method, std::span<const double> data,
                      std::span<const std::uint8_t> mask = {});

enum class ScaleMethod { None, Std, Max, Iqr, Lip };

std::string method_name(ScaleMethod m);
ScaleMethod method_from_name(const std::string& name);

/// Per-column planning outcome; failed columns carry the error while the rest
/// of the plan still succeeds.
struct PlanEntry {
    std::string column;
    bool ok = true;
    double omega = 1.0;
    double target_l = 0.0;  // budgeted L* (lip only; L*/K inside trick groups)
    bool has_achieved = false;
    smoothness::SmoothnessEstimate achieved;
    bool infeasible = false;
    bool passthrough_discrete = false;
    std::vector<std::string> warnings;
    std::string error;
    int error_class = 0;
};

/// Solve one omega per column. Tricks must already be applied; columns in a
/// trick group of size K are budgeted L*/K each, independent columns L*.
/// Discrete columns pass through with omega = 1.
std::vector<PlanEntry> plan_dataset(const dataio::DatasetFrame& frame, const ScalingTarget& target,
                                    ScaleMethod method);

}  // namespace lipstd::scaler
