#include "lipstd/tricks.hpp"

#include <algorithm>
#include <cmath>

#include "lipstd/error.hpp"

namespace lipstd::tricks {

std::string trick_name(TrickKind t) {
    switch (t) {
        case TrickKind::Gamma: return "gamma";
        case TrickKind::Bernoulli: return "bernoulli";
        case TrickKind::BernoulliThenGamma: return "bernoulli_then_gamma";
    }
    return "unknown";
}

TrickKind trick_from_name(const std::string& name) {
    if (name == "gamma") return TrickKind::Gamma;
    if (name == "bernoulli") return TrickKind::Bernoulli;
    if (name == "bernoulli_then_gamma") return TrickKind::BernoulliThenGamma;
    throw Error(errc::parse, "unknown trick name '" + name + "'");
}

BernoulliTrickResult apply_bernoulli_trick(std::span<const double> column,
                                           std::span<const std::uint8_t> present, int k) {
    if (k < 2) {
        throw Error(errc::invalid_category, "bernoulli trick requires k >= 2");
    }
    BernoulliTrickResult out;
    out.columns.assign(k, std::vector<double>(column.size(), 0.0));
    out.present.assign(k, std::vector<std::uint8_t>(column.size(), 1));
    for (std::size_t i = 0; i < column.size(); ++i) {
        const bool here = present.empty() || present[i];
        if (!here) {
            for (int c = 0; c < k; ++c) out.present[c][i] = 0;
            continue;
        }
        const double v = column[i];
        if (!(v == std::floor(v)) || v < 0.0 || v >= static_cast<double>(k)) {
            throw Error(errc::invalid_category, "category value " + std::to_string(v) + " outside 0.." +
                                                    std::to_string(k - 1) + " at row " + std::to_string(i));
        }
        out.columns[static_cast<int>(v)][i] = 1.0;
    }
    return out;
}

GammaTrickResult apply_gamma_trick(std::span<const double> column,
                                   std::span<const std::uint8_t> present,
                                   const NoiseConfig& noise) {
    GammaTrickResult out;
    out.values.assign(column.begin(), column.end());
    out.present.assign(column.size(), 1);
    if (!present.empty()) {
        out.present.assign(present.begin(), present.end());
    }
    Rng rng(noise.seed);
    for (std::size_t i = 0; i < column.size(); ++i) {
        if (!out.present[i]) {
            continue;  // missing entries receive no noise and stay missing
        }
        const double v = column[i];
        if (!(v == std::floor(v)) || v < 0.0) {
            throw Error(errc::invalid_count,
                        "gamma trick requires non-negative integers, got " + std::to_string(v) + " at row " +
                            std::to_string(i));
        }
        out.values[i] = v + rng.beta(noise.beta_a, noise.beta_b);
    }
    std::vector<double> observed;
    observed.reserve(column.size());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        if (out.present[i]) observed.push_back(out.values[i]);
    }
    out.gamma_fit = expfam::fit_empirical(expfam::FamilyKind::Gamma, observed);
    return out;
}

double recover_bernoulli(const expfam::CanonicalParams& gamma_params, const NoiseConfig& noise) {
    expfam::validate_canonical(expfam::FamilyKind::Gamma, gamma_params);
    const double mu = gamma_params.values[0] / gamma_params.values[1] - noise.mean();
    return std::clamp(mu, 0.0, 1.0);
}

double recover_poisson(const expfam::CanonicalParams& gamma_params, const NoiseConfig& noise,
                       double delta) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw Error(errc::invalid_parameter, "poisson recovery delta must lie in (0,1)");
    }
    expfam::validate_canonical(expfam::FamilyKind::Gamma, gamma_params);
    const double mu = gamma_params.values[0] / gamma_params.values[1] - noise.mean();
    return std::max(delta, mu);
}

CategoricalRecovery recover_categorical(std::span<const double> per_class_means) {
    if (per_class_means.size() < 2) {
        throw Error(errc::invalid_category, "categorical recovery requires k >= 2 class means");
    }
    CategoricalRecovery out;
    double sum = 0.0;
    for (double m : per_class_means) sum += m;
    if (sum <= 0.0) {
        out.degenerate = true;
        out.pi.assign(per_class_means.size(), 1.0 / static_cast<double>(per_class_means.size()));
        return out;
    }
    out.pi.reserve(per_class_means.size());
    for (double m : per_class_means) out.pi.push_back(m / sum);
    return out;
}

double end_to_end_recovery_error(DiscreteKind kind, std::span<const double> param_grid,
                                 std::size_t n, std::uint64_t seed) {
    double total_err = 0.0;
    for (std::size_t cell = 0; cell < param_grid.size(); ++cell) {
        const double truth = param_grid[cell];
        Rng rng = Rng::split(seed, cell);
        std::vector<double> data(n);
        for (double& v : data) {
            v = kind == DiscreteKind::Bernoulli ? static_cast<double>(rng.bernoulli(truth))
                                                : static_cast<double>(rng.poisson(truth));
        }
        NoiseConfig noise;
        noise.seed = seed ^ (0x5851f42d4c957f2dULL + cell);
        const GammaTrickResult noised = apply_gamma_trick(data, {}, noise);
        const double recovered = kind == DiscreteKind::Bernoulli
                                     ? recover_bernoulli(noised.gamma_fit, noise)
                                     : recover_poisson(noised.gamma_fit, noise);
        total_err += std::abs(recovered - truth);
    }
    return total_err / static_cast<double>(param_grid.size());
}

}  // namespace lipstd::tricks
