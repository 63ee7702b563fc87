#include "lipstd/scaler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace lipstd::scaler {

using expfam::Family;
using expfam::FamilyKind;
using expfam::NaturalParams;

ScalingTarget ScalingTarget::from_learning_rate(double alpha, int d_dims) {
    if (!(alpha > 0.0) || d_dims < 1) {
        throw Error(errc::invalid_parameter, "scaling target requires alpha > 0 and d_dims >= 1");
    }
    ScalingTarget t;
    t.alpha = alpha;
    t.d_dims = d_dims;
    t.l_star = 1.0 / (static_cast<double>(d_dims) * alpha);
    return t;
}

std::vector<double> scaled_constants(Family family, const smoothness::SmoothnessEstimate& base,
                                     double omega) {
    const expfam::ScalingLaw law = expfam::scaling_law(family);
    const int n = law.size();
    double fsum = 0.0;
    for (int j = 0; j < n; ++j) {
        fsum += std::abs(law.f(j, omega));
    }
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        out[i] = std::abs(law.f(i, omega)) * fsum * base.per_param[i];
    }
    return out;
}

double scaled_total(Family family, const smoothness::SmoothnessEstimate& base, double omega) {
    const std::vector<double> c = scaled_constants(family, base, omega);
    double total = 0.0;
    for (double v : c) total += v;
    return total;
}

double solve_quartic_positive_root(double l1, double l2, double l_star) {
    if (!(l2 > 0.0) || !(l_star > 0.0) || l1 < 0.0) {
        throw Error(errc::invalid_parameter, "quartic solve requires l1 >= 0, l2 > 0, l_star > 0");
    }
    const auto q = [&](double w) {
        const double w2 = w * w;
        return l2 * w2 * w2 + (l1 + l2) * w2 * w + l1 * w2 - l_star;
    };
    // Q(0) = -l_star < 0 and Q is strictly increasing on (0, inf): bracket by doubling.
    double hi = 1.0;
    int doublings = 0;
    while (q(hi) < 0.0) {
        hi *= 2.0;
        if (++doublings > 200) {
            throw Error(errc::no_root, "quartic bracket expansion failed");
        }
    }
    double lo = 0.0;
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            break;  // interval collapsed to adjacent doubles
        }
        if (q(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return std::abs(q(lo)) <= std::abs(q(hi)) ? lo : hi;
}

namespace {

struct Bracket {
    double lo;
    double hi;
};

// g must change sign between lo and hi; bisect until the interval collapses.
double bisect(const std::function<double(double)>& g, Bracket b, int max_iter) {
    double glo = g(b.lo);
    for (int iter = 0; iter < max_iter; ++iter) {
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi || (b.hi - b.lo) <= 1e-12) {
            break;
        }
        const double gm = g(mid);
        if ((gm < 0.0) == (glo < 0.0)) {
            b.lo = mid;
            glo = gm;
        } else {
            b.hi = mid;
        }
    }
    return std::abs(g(b.lo)) <= std::abs(g(b.hi)) ? b.lo : b.hi;
}

double golden_min_abs(const std::function<double(double)>& g, Bracket b) {
    const double phi = 0.6180339887498949;
    double a = b.lo;
    double d = b.hi;
    double c = d - phi * (d - a);
    double e = a + phi * (d - a);
    double gc = std::abs(g(c));
    double ge = std::abs(g(e));
    for (int iter = 0; iter < 200 && (d - a) > 1e-12 * std::max(1.0, std::abs(d)); ++iter) {
        if (gc < ge) {
            d = e;
            e = c;
            ge = gc;
            c = d - phi * (d - a);
            gc = std::abs(g(c));
        } else {
            a = c;
            c = e;
            gc = ge;
            e = a + phi * (d - a);
            ge = std::abs(g(e));
        }
    }
    return 0.5 * (a + d);
}

ScalingResult finish(Family family, const NaturalParams& nat,
                     const smoothness::SmoothnessEstimate& base, double omega, double l_star,
                     SolveMethod method) {
    ScalingResult res;
    res.omega = omega;
    res.method = method;
    res.achieved.per_param = scaled_constants(family, base, omega);
    res.achieved.total = 0.0;
    for (double v : res.achieved.per_param) res.achieved.total += v;
    res.achieved.at_params = expfam::scale_natural(family, nat, omega);
    res.residual = std::abs(res.achieved.total - l_star);
    return res;
}

}  // namespace

ScalingResult solve_omega(Family family, const NaturalParams& nat, const ScalingTarget& target) {
    if (!(target.l_star > 0.0)) {
        throw Error(errc::invalid_parameter, "scaling target l_star must be positive");
    }
    const smoothness::SmoothnessEstimate base = smoothness::estimate(family, nat);
    const double l_star = target.l_star;

    switch (family.kind) {
        case FamilyKind::Exponential: {
            const double omega = std::sqrt(l_star / base.per_param[0]);
            return finish(family, nat, base, omega, l_star, SolveMethod::ClosedForm);
        }
        case FamilyKind::Gamma: {
            const double l1 = base.per_param[0];
            const double l2 = base.per_param[1];
            if (l_star > l1) {
                const double disc = (l1 - l2) * (l1 - l2) + 4.0 * l2 * l_star;
                const double omega = (-l1 - l2 + std::sqrt(disc)) / (2.0 * l2);
                return finish(family, nat, base, omega, l_star, SolveMethod::ClosedForm);
            }
            // No root exists for l_star <= L1; fall back to the argmin of
            // (scaled_total - l_star)^2, which sits at the low-omega edge.
            const auto g = [&](double w) { return scaled_total(family, base, w) - l_star; };
            const double omega = golden_min_abs(g, {0x1.0p-60, 1.0});
            ScalingResult res = finish(family, nat, base, omega, l_star, SolveMethod::ClosedForm);
            res.infeasible = true;
            res.warning = "target " + std::to_string(l_star) + " is at or below the attainable minimum L1 = " +
                          std::to_string(l1) + "; returning best-effort omega";
            return res;
        }
        case FamilyKind::Normal:
        case FamilyKind::LogNormal: {
            const double omega =
                solve_quartic_positive_root(base.per_param[0], base.per_param[1], l_star);
            return finish(family, nat, base, omega, l_star, SolveMethod::ClosedForm);
        }
        default: {
            const auto g = [&](double w) { return scaled_total(family, base, w) - l_star; };
            // Scan a geometric grid for a sign change; the scaled total is
            // monotone or single-dipped for every supported family, so the
            // first alternation brackets a root.
            double prev_w = 0x1.0p-60;
            double prev_g = g(prev_w);
            double best_w = prev_w;
            double best_abs = std::abs(prev_g);
            for (int k = -59; k <= 60; ++k) {
                const double w = std::ldexp(1.0, k);
                const double gw = g(w);
                if (std::abs(gw) < best_abs) {
                    best_abs = std::abs(gw);
                    best_w = w;
                }
                if ((gw < 0.0) != (prev_g < 0.0) || gw == 0.0) {
                    const double omega = bisect(g, {prev_w, w}, 200);
                    return finish(family, nat, base, omega, l_star, SolveMethod::Bisection);
                }
                prev_w = w;
                prev_g = gw;
            }
            const double omega = golden_min_abs(g, {best_w * 0.5, best_w * 2.0});
            ScalingResult res = finish(family, nat, base, omega, l_star, SolveMethod::Bisection);
            res.infeasible = true;
            res.warning = "no omega reaches target " + std::to_string(l_star) + "; returning best-effort omega";
            return res;
        }
    }
}

double baseline_omega(BaselineMethod method, std::span<const double> data,
                      std::span<const std::uint8_t> mask) {
    std::vector<double> x;
    x.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (mask.empty() || mask[i]) {
            x.push_back(data[i]);
        }
    }
    if (x.size() < 2) {
        throw Error(errc::degenerate_column, "baseline scaling needs at least 2 present values");
    }
    double stat = 0.0;
    switch (method) {
        case BaselineMethod::Std: {
            double m = 0.0;
            for (double v : x) m += v;
            m /= static_cast<double>(x.size());
            double var = 0.0;
            for (double v : x) var += (v - m) * (v - m);
            var /= static_cast<double>(x.size());
            stat = std::sqrt(var);
            break;
        }
        case BaselineMethod::Max: {
            for (double v : x) stat = std::max(stat, std::abs(v));
            break;
        }
        case BaselineMethod::Iqr: {
            std::sort(x.begin(), x.end());
            const auto quantile = [&](double p) {
                const double h = p * static_cast<double>(x.size() - 1);
                const std::size_t i = static_cast<std::size_t>(h);
                if (i + 1 >= x.size()) return x.back();
                return x[i] + (h - static_cast<double>(i)) * (x[i + 1] - x[i]);
            };
            stat = quantile(0.75) - quantile(0.25);
            break;
        }
    }
    if (!(stat > 0.0)) {
        throw Error(errc::degenerate_column,
                    "degenerate column: scaling statistic is zero (" + std::to_string(stat) + ")");
    }
    return 1.0 / stat;
}

std::string method_name(ScaleMethod m) {
    switch (m) {
        case ScaleMethod::None: return "none";
        case ScaleMethod::Std: return "std";
        case ScaleMethod::Max: return "max";
        case ScaleMethod::Iqr: return "iqr";
        case ScaleMethod::Lip: return "lip";
    }
    return "unknown";
}

ScaleMethod method_from_name(const std::string& name) {
    if (name == "none") return ScaleMethod::None;
    if (name == "std") return ScaleMethod::Std;
    if (name == "max") return ScaleMethod::Max;
    if (name == "iqr") return ScaleMethod::Iqr;
    if (name == "lip") return ScaleMethod::Lip;
    throw Error(errc::usage, "unknown scaling method '" + name + "'");
}

std::vector<PlanEntry> plan_dataset(const dataio::DatasetFrame& frame, const ScalingTarget& target,
                                    ScaleMethod method) {
    std::vector<PlanEntry> plan;
    plan.reserve(frame.columns.size());
    for (const dataio::Column& col : frame.columns) {
        PlanEntry entry;
        entry.column = col.spec.name;
        if (col.spec.family.is_discrete()) {
            entry.passthrough_discrete = true;
            entry.warnings.push_back("discrete column passed through unscaled");
            plan.push_back(std::move(entry));
            continue;
        }
        try {
            const expfam::CanonicalParams fit =
                expfam::fit_empirical(col.spec.family, col.values, col.present);
            const NaturalParams nat = expfam::to_natural(col.spec.family, fit);
            const smoothness::SmoothnessEstimate base = smoothness::estimate(col.spec.family, nat);

            switch (method) {
                case ScaleMethod::None:
                    entry.omega = 1.0;
                    break;
                case ScaleMethod::Std:
                case ScaleMethod::Max:
                case ScaleMethod::Iqr: {
                    const BaselineMethod bm = method == ScaleMethod::Std ? BaselineMethod::Std
                                              : method == ScaleMethod::Max ? BaselineMethod::Max
                                                                           : BaselineMethod::Iqr;
                    // Scaling acts on log x for LogNormal, so the statistic does too.
                    std::vector<double> obs;
                    obs.reserve(col.values.size());
                    for (std::size_t i = 0; i < col.values.size(); ++i) {
                        if (col.present.empty() || col.present[i]) {
                            obs.push_back(col.spec.family.kind == FamilyKind::LogNormal
                                              ? std::log(col.values[i])
                                              : col.values[i]);
                        }
                    }
                    entry.omega = baseline_omega(bm, obs);
                    break;
                }
                case ScaleMethod::Lip: {
                    const std::size_t group =
                        col.spec.trick ? std::max<std::size_t>(col.spec.trick->group.size(), 1) : 1;
                    ScalingTarget budget = target;
                    budget.l_star = target.l_star / static_cast<double>(group);
                    const ScalingResult res = solve_omega(col.spec.family, nat, budget);
                    entry.omega = res.omega;
                    entry.target_l = budget.l_star;
                    entry.infeasible = res.infeasible;
                    if (!res.warning.empty()) {
                        entry.warnings.push_back(res.warning);
                    }
                    break;
                }
            }
            entry.achieved.per_param = scaled_constants(col.spec.family, base, entry.omega);
            entry.achieved.total = 0.0;
            for (double v : entry.achieved.per_param) entry.achieved.total += v;
            entry.achieved.at_params = expfam::scale_natural(col.spec.family, nat, entry.omega);
            entry.has_achieved = true;
        } catch (const Error& e) {
            entry.ok = false;
            entry.error = e.what();
            entry.error_class = exit_class(e.code());
        }
        plan.push_back(std::move(entry));
    }
    return plan;
}

}  // namespace lipstd::scaler
