#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipstd/frame.hpp"
#include "lipstd/rng.hpp"

namespace lipstd::harness {

struct SyntheticSpec {
    std::string name;
    expfam::Family family;
    expfam::CanonicalParams params;
};

/// i.i.d. draws per column from seeded per-column streams. The returned frame
/// holds the true draw in every cell; the present mask marks the observed
/// pattern (missing cells are hidden uniformly at random), so the same frame
/// serves as ground truth for the imputation metrics.
dataio::DatasetFrame generate_synthetic(std::span<const SyntheticSpec> specs, std::size_t n_rows,
                                        std::uint64_t seed, double missing_rate);

/// Per-column optimization trace of plain gradient ascent in natural-parameter
/// space. Log-likelihoods and gradients are per-sample means, so the
/// convergence threshold of 1e-6 on the mean-gradient 1-norm matches a
/// sample-count-proportional threshold on the summed gradient.
struct FitTrace {
    struct ColumnTrace {
        std::string column;
        std::vector<double> loglik;     // length iters+1
        std::vector<double> grad_norm;  // length iters+1, 1-norm
        long converged_at = -1;         // first t with grad_norm <= threshold; -1 if never
        expfam::NaturalParams final_params;
    };
    std::vector<ColumnTrace> columns;
    long iterations = 0;
    double threshold = 1e-6;
};

/// Gradient ascent with one shared step size on every column, initialized at a
/// fixed neutral point per family. Iterates leaving the natural domain are
/// pulled back to the boundary offset 1e-6 toward the interior.
FitTrace fit_columns(const dataio::DatasetFrame& frame, double alpha, long iters);

struct BalanceReport {
    std::vector<double> improvement_dispersion;  // per iteration, max |imp_d - mean imp|
    double gradient_norm_ratio = 1.0;            // max_d g_d(0) / min_d g_d(0)
    double convergence_spread = 1.0;             // max/min iterations-to-converge
    bool all_converged = false;
};

/// Eq-4-style diagnostics: normalized improvements (l(t+1)-l(t))/|l(0)| and
/// their cross-column dispersion per iteration.
BalanceReport balance_report(const FitTrace& trace);

struct ImputationResult {
    std::vector<std::string> columns;
    std::vector<double> per_column;
    double mean = 0.0;
};

/// Range-normalized RMSE for numeric columns, misclassification rate for
/// binary/categorical ones, evaluated only on cells the truth mask marks as
/// missing; final metric is the mean across columns.
ImputationResult imputation_metrics(const dataio::DatasetFrame& truth,
                                    const dataio::DatasetFrame& imputed);

/// Draw one value from a family (used by generate_synthetic and tests).
double draw(expfam::Family family, const expfam::CanonicalParams& params, Rng& rng);

}  // namespace lipstd::harness
