#include "lipstd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lipstd::harness {

using dataio::Column;
using dataio::DatasetFrame;
using expfam::Family;
using expfam::FamilyKind;
using expfam::NaturalParams;

double draw(Family family, const expfam::CanonicalParams& params, Rng& rng) {
    const auto& t = params.values;
    switch (family.kind) {
        case FamilyKind::Normal:
            return rng.normal(t[0], std::sqrt(t[1]));
        case FamilyKind::LogNormal:
            return rng.lognormal(t[0], std::sqrt(t[1]));
        case FamilyKind::Gamma:
            return rng.gamma(t[0], t[1]);
        case FamilyKind::InverseGaussian:
            return rng.inverse_gaussian(t[0], t[1]);
        case FamilyKind::InverseGamma:
            return rng.inverse_gamma(t[0], t[1]);
        case FamilyKind::Exponential:
            return rng.exponential(t[0]);
        case FamilyKind::Rayleigh:
            return rng.rayleigh(t[0]);
        case FamilyKind::Bernoulli:
            return static_cast<double>(rng.bernoulli(t[0]));
        case FamilyKind::Poisson:
            return static_cast<double>(rng.poisson(t[0]));
        case FamilyKind::Categorical:
            return static_cast<double>(rng.categorical(t));
    }
    return 0.0;
}

dataio::DatasetFrame generate_synthetic(std::span<const SyntheticSpec> specs, std::size_t n_rows,
                                        std::uint64_t seed, double missing_rate) {
    if (!(missing_rate >= 0.0 && missing_rate < 1.0)) {
        throw Error(errc::invalid_parameter, "missing_rate must lie in [0, 1)");
    }
    DatasetFrame frame;
    frame.n_rows = n_rows;
    for (std::size_t c = 0; c < specs.size(); ++c) {
        const SyntheticSpec& spec = specs[c];
        expfam::validate_canonical(spec.family, spec.params);
        Column col;
        col.spec.name = spec.name.empty() ? "col" + std::to_string(c) : spec.name;
        col.spec.family = spec.family;
        switch (spec.family.kind) {
            case FamilyKind::Normal: col.spec.kind = dataio::ColumnKind::Real; break;
            case FamilyKind::Bernoulli: col.spec.kind = dataio::ColumnKind::Binary; break;
            case FamilyKind::Poisson: col.spec.kind = dataio::ColumnKind::Count; break;
            case FamilyKind::Categorical: {
                col.spec.kind = dataio::ColumnKind::Categorical;
                for (int k = 0; k < spec.family.k; ++k) {
                    col.spec.categories.push_back(std::to_string(k));
                }
                break;
            }
            default: col.spec.kind = dataio::ColumnKind::PositiveReal; break;
        }
        col.values.resize(n_rows);
        col.present.assign(n_rows, 1);
        Rng rng = Rng::split(seed, c);
        for (std::size_t r = 0; r < n_rows; ++r) {
            col.values[r] = draw(spec.family, spec.params, rng);
        }
        if (missing_rate > 0.0) {
            Rng mask_rng = Rng::split(seed ^ 0x9e3779b97f4a7c15ULL, c);
            for (std::size_t r = 0; r < n_rows; ++r) {
                if (mask_rng.uniform() < missing_rate) {
                    col.present[r] = 0;
                }
            }
        }
        frame.columns.push_back(std::move(col));
    }
    return frame;
}

namespace {

NaturalParams neutral_init(Family family) {
    // Fixed neutral point per family so cross-method comparisons are fair.
    expfam::CanonicalParams canon;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            canon.values = {0.0, 1.0};
            break;
        case FamilyKind::Gamma:
        case FamilyKind::InverseGamma:
            canon.values = {1.0, 1.0};
            break;
        case FamilyKind::InverseGaussian:
            canon.values = {1.0, 1.0};
            break;
        case FamilyKind::Exponential:
        case FamilyKind::Poisson:
            canon.values = {1.0};
            break;
        case FamilyKind::Rayleigh:
            canon.values = {1.0};
            break;
        case FamilyKind::Bernoulli:
            canon.values = {0.5};
            break;
        case FamilyKind::Categorical:
            canon.values.assign(family.k, 1.0 / static_cast<double>(family.k));
            break;
    }
    return expfam::to_natural(family, canon);
}

void project_into_domain(Family family, NaturalParams& nat) {
    const expfam::NaturalBounds b = expfam::natural_domain(family);
    constexpr double kOffset = 1e-6;
    for (int i = 0; i < family.param_count(); ++i) {
        if (std::isfinite(b.lo[i]) && nat.values[i] <= b.lo[i]) {
            nat.values[i] = b.lo[i] + kOffset;
        }
        if (std::isfinite(b.hi[i]) && nat.values[i] >= b.hi[i]) {
            nat.values[i] = b.hi[i] - kOffset;
        }
    }
}

}  // namespace

FitTrace fit_columns(const DatasetFrame& frame, double alpha, long iters) {
    if (!(alpha > 0.0) || iters < 1) {
        throw Error(errc::invalid_parameter, "fit_columns requires alpha > 0 and iters >= 1");
    }
    FitTrace trace;
    trace.iterations = iters;
    for (const Column& col : frame.columns) {
        const Family family = col.spec.family;
        const int npar = family.param_count();

        // Sufficient-statistic means make each ascent step O(1) in the sample count.
        std::vector<double> t_mean(npar, 0.0);
        double h_mean = 0.0;
        std::size_t n = 0;
        for (std::size_t r = 0; r < col.values.size(); ++r) {
            if (!col.present.empty() && !col.present[r]) continue;
            const double x = col.values[r];
            if (!expfam::in_support(family, x)) {
                throw Error(errc::support, "column '" + col.spec.name + "': value " + std::to_string(x) +
                                               " outside the support of " + family.name());
            }
            const std::vector<double> t = expfam::sufficient_stats(family, x);
            for (int i = 0; i < npar; ++i) t_mean[i] += t[i];
            h_mean += expfam::log_base_measure(family, x);
            ++n;
        }
        if (n < 2) {
            throw Error(errc::degenerate_column, "column '" + col.spec.name + "' has fewer than 2 present values");
        }
        for (int i = 0; i < npar; ++i) t_mean[i] /= static_cast<double>(n);
        h_mean /= static_cast<double>(n);

        FitTrace::ColumnTrace ct;
        ct.column = col.spec.name;
        NaturalParams eta = neutral_init(family);
        for (long t = 0; t <= iters; ++t) {
            double dot = 0.0;
            for (int i = 0; i < npar; ++i) dot += eta.values[i] * t_mean[i];
            const double loglik = h_mean + dot - expfam::log_partition(family, eta);
            const std::vector<double> grad_a = expfam::log_partition_grad(family, eta);
            double gnorm = 0.0;
            std::vector<double> grad(npar);
            for (int i = 0; i < npar; ++i) {
                grad[i] = t_mean[i] - grad_a[i];
                gnorm += std::abs(grad[i]);
            }
            if (!std::isfinite(loglik) || !std::isfinite(gnorm)) {
                throw Error(errc::divergence, "column '" + col.spec.name + "' diverged at iteration " +
                                                  std::to_string(t) + " (non-finite objective)");
            }
            ct.loglik.push_back(loglik);
            ct.grad_norm.push_back(gnorm);
            if (ct.converged_at < 0 && gnorm <= trace.threshold) {
                ct.converged_at = t;
            }
            if (t == iters) break;
            for (int i = 0; i < npar; ++i) {
                eta.values[i] += alpha * grad[i];
            }
            project_into_domain(family, eta);
        }
        ct.final_params = eta;
        trace.columns.push_back(std::move(ct));
    }
    return trace;
}

BalanceReport balance_report(const FitTrace& trace) {
    if (trace.columns.empty() || trace.columns[0].loglik.size() < 2) {
        throw Error(errc::invalid_parameter, "balance report needs a non-empty trace");
    }
    const std::size_t d = trace.columns.size();
    const std::size_t steps = trace.columns[0].loglik.size() - 1;

    BalanceReport report;
    for (const auto& ct : trace.columns) {
        if (ct.loglik[0] == 0.0) {
            throw Error(errc::degenerate_normalization,
                        "column '" + ct.column + "': initial log-likelihood is zero, improvements are undefined");
        }
    }
    report.improvement_dispersion.resize(steps, 0.0);
    for (std::size_t t = 0; t < steps; ++t) {
        double mean = 0.0;
        std::vector<double> imp(d);
        for (std::size_t c = 0; c < d; ++c) {
            const auto& l = trace.columns[c].loglik;
            imp[c] = (l[t + 1] - l[t]) / std::abs(l[0]);
            mean += imp[c];
        }
        mean /= static_cast<double>(d);
        double disp = 0.0;
        for (double v : imp) disp = std::max(disp, std::abs(v - mean));
        report.improvement_dispersion[t] = disp;
    }

    double gmax = 0.0;
    double gmin = std::numeric_limits<double>::infinity();
    for (const auto& ct : trace.columns) {
        gmax = std::max(gmax, ct.grad_norm[0]);
        gmin = std::min(gmin, ct.grad_norm[0]);
    }
    report.gradient_norm_ratio = gmax == 0.0 ? 1.0 : gmax / gmin;

    long cmax = 0;
    long cmin = std::numeric_limits<long>::max();
    report.all_converged = true;
    for (const auto& ct : trace.columns) {
        const long conv = ct.converged_at >= 0 ? ct.converged_at : trace.iterations;
        if (ct.converged_at < 0) report.all_converged = false;
        cmax = std::max(cmax, conv);
        cmin = std::min(cmin, conv);
    }
    report.convergence_spread = cmax == 0 ? 1.0
                                          : (cmin == 0 ? std::numeric_limits<double>::infinity()
                                                       : static_cast<double>(cmax) / static_cast<double>(cmin));
    return report;
}

ImputationResult imputation_metrics(const DatasetFrame& truth, const DatasetFrame& imputed) {
    if (truth.columns.size() != imputed.columns.size() || truth.n_rows != imputed.n_rows) {
        throw Error(errc::metadata_mismatch, "truth and imputed frames are not aligned");
    }
    ImputationResult res;
    for (std::size_t c = 0; c < truth.columns.size(); ++c) {
        const Column& tc = truth.columns[c];
        const Column& ic = imputed.columns[c];
        const bool nominal =
            tc.spec.kind == dataio::ColumnKind::Binary || tc.spec.kind == dataio::ColumnKind::Categorical;

        std::size_t n_miss = 0;
        double sq = 0.0;
        double wrong = 0.0;
        for (std::size_t r = 0; r < truth.n_rows; ++r) {
            if (!tc.present.empty() && tc.present[r]) continue;  // only originally-missing cells
            ++n_miss;
            if (nominal) {
                wrong += tc.values[r] != ic.values[r] ? 1.0 : 0.0;
            } else {
                const double d = tc.values[r] - ic.values[r];
                sq += d * d;
            }
        }

        double err = 0.0;
        if (n_miss > 0) {
            if (nominal) {
                err = wrong / static_cast<double>(n_miss);
            } else {
                const auto [mn, mx] = std::minmax_element(tc.values.begin(), tc.values.end());
                const double range = *mx - *mn;
                if (!(range > 0.0)) {
                    throw Error(errc::degenerate_range,
                                "column '" + tc.spec.name + "' has zero range; NRMSE is undefined");
                }
                err = std::sqrt(sq / static_cast<double>(n_miss)) / range;
            }
        }
        res.columns.push_back(tc.spec.name);
        res.per_column.push_back(err);
    }
    double sum = 0.0;
    for (double e : res.per_column) sum += e;
    res.mean = res.per_column.empty() ? 0.0 : sum / static_cast<double>(res.per_column.size());
    return res;
}

}  // namespace lipstd::harness
