#include "lipstd/expfam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lipstd/special.hpp"

namespace lipstd::expfam {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kHalfLog2Pi = 0.91893853320467274178;

[[noreturn]] void bad_param(const std::string& family, const std::string& field, double value,
                            const std::string& constraint) {
    throw Error(errc::invalid_parameter,
                family + ": parameter '" + field + "' = " + std::to_string(value) + " violates " + constraint);
}

double mean_of(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct GammaFit {
    double alpha;
    double beta;
};

// Closed-form shape approximation from the log-moment gap s = log(mean) - mean(log x).
GammaFit fit_gamma_moments(std::span<const double> x, const char* what) {
    const double m = mean_of(x);
    double mean_log = 0.0;
    for (double v : x) {
        mean_log += std::log(v);
    }
    mean_log /= static_cast<double>(x.size());
    const double s = std::log(m) - mean_log;
    if (!(s > 0.0)) {
        throw Error(errc::degenerate_column,
                    std::string(what) + ": log-moment gap s = " + std::to_string(s) +
                        " is not positive (constant or near-constant column)");
    }
    const double alpha = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    return {alpha, alpha / m};
}

}  // namespace

Family::Family(FamilyKind kind_) : kind(kind_) {
    if (kind_ == FamilyKind::Categorical) {
        throw Error(errc::invalid_parameter, "Categorical requires a class count; use Family::categorical(k)");
    }
}

Family Family::categorical(int k) {
    if (k < 2) {
        throw Error(errc::invalid_parameter, "Categorical requires k >= 2, got " + std::to_string(k));
    }
    Family f;
    f.kind = FamilyKind::Categorical;
    f.k = k;
    return f;
}

bool Family::is_continuous() const {
    switch (kind) {
        case FamilyKind::Bernoulli:
        case FamilyKind::Poisson:
        case FamilyKind::Categorical:
            return false;
        default:
            return true;
    }
}

int Family::param_count() const {
    switch (kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
        case FamilyKind::Gamma:
        case FamilyKind::InverseGaussian:
        case FamilyKind::InverseGamma:
            return 2;
        case FamilyKind::Categorical:
            return k;
        default:
            return 1;
    }
}

std::string Family::name() const {
    switch (kind) {
        case FamilyKind::Normal: return "normal";
        case FamilyKind::LogNormal: return "lognormal";
        case FamilyKind::Gamma: return "gamma";
        case FamilyKind::InverseGaussian: return "invgaussian";
        case FamilyKind::InverseGamma: return "invgamma";
        case FamilyKind::Exponential: return "exponential";
        case FamilyKind::Rayleigh: return "rayleigh";
        case FamilyKind::Bernoulli: return "bernoulli";
        case FamilyKind::Poisson: return "poisson";
        case FamilyKind::Categorical: return "categorical(" + std::to_string(k) + ")";
    }
    return "unknown";
}

Family family_from_name(const std::string& name) {
    if (name == "normal") return Family(FamilyKind::Normal);
    if (name == "lognormal") return Family(FamilyKind::LogNormal);
    if (name == "gamma") return Family(FamilyKind::Gamma);
    if (name == "invgaussian") return Family(FamilyKind::InverseGaussian);
    if (name == "invgamma") return Family(FamilyKind::InverseGamma);
    if (name == "exponential") return Family(FamilyKind::Exponential);
    if (name == "rayleigh") return Family(FamilyKind::Rayleigh);
    if (name == "bernoulli") return Family(FamilyKind::Bernoulli);
    if (name == "poisson") return Family(FamilyKind::Poisson);
    if (name.rfind("categorical(", 0) == 0 && name.back() == ')') {
        return Family::categorical(std::stoi(name.substr(12, name.size() - 13)));
    }
    throw Error(errc::parse, "unknown family name '" + name + "'");
}

// --- Scaling laws -----------------------------------------------------------------

ScalingLaw scaling_law(Family family) {
    if (family.is_discrete()) {
        throw Error(errc::unsupported_family, family.name() + " has no scaling law; apply a trick first");
    }
    ScalingLaw law;
    law.family = family;
    law.transform = family.kind == FamilyKind::LogNormal ? DataTransform::Power : DataTransform::Linear;
    return law;
}

double ScalingLaw::f(int i, double omega) const {
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            return i == 0 ? omega : omega * omega;
        case FamilyKind::Gamma:
            return i == 0 ? 1.0 : omega;
        case FamilyKind::InverseGaussian:
            return i == 0 ? omega : 1.0 / omega;
        case FamilyKind::InverseGamma:
            return i == 0 ? 1.0 : 1.0 / omega;
        case FamilyKind::Exponential:
            return omega;
        case FamilyKind::Rayleigh:
            return omega * omega;
        default:
            throw Error(errc::unsupported_family, family.name() + " has no scaling law");
    }
}

double ScalingLaw::g(int i, double omega) const {
    // Only the log-statistic families pick up an additive offset.
    if ((family.kind == FamilyKind::Gamma || family.kind == FamilyKind::InverseGamma) && i == 0) {
        return std::log(omega);
    }
    return 0.0;
}

// --- Validation -------------------------------------------------------------------

void validate_canonical(Family family, const CanonicalParams& canon) {
    const auto& v = canon.values;
    if (static_cast<int>(v.size()) != family.param_count()) {
        throw Error(errc::invalid_parameter, family.name() + ": expected " + std::to_string(family.param_count()) +
                                                 " canonical parameters, got " + std::to_string(v.size()));
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw Error(errc::invalid_parameter, family.name() + ": non-finite canonical parameter");
        }
    }
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            if (!(v[1] > 0.0)) bad_param(family.name(), "sigma2", v[1], "sigma2 > 0");
            break;
        case FamilyKind::Gamma:
        case FamilyKind::InverseGamma:
            if (!(v[0] > 0.0)) bad_param(family.name(), "alpha", v[0], "alpha > 0");
            if (!(v[1] > 0.0)) bad_param(family.name(), "beta", v[1], "beta > 0");
            break;
        case FamilyKind::InverseGaussian:
            if (!(v[0] > 0.0)) bad_param(family.name(), "mu", v[0], "mu > 0");
            if (!(v[1] > 0.0)) bad_param(family.name(), "lambda", v[1], "lambda > 0");
            break;
        case FamilyKind::Exponential:
            if (!(v[0] > 0.0)) bad_param(family.name(), "lambda", v[0], "lambda > 0");
            break;
        case FamilyKind::Rayleigh:
            if (!(v[0] > 0.0)) bad_param(family.name(), "sigma", v[0], "sigma > 0");
            break;
        case FamilyKind::Bernoulli:
            if (!(v[0] >= 0.0 && v[0] <= 1.0)) bad_param(family.name(), "p", v[0], "p in [0,1]");
            break;
        case FamilyKind::Poisson:
            if (!(v[0] > 0.0)) bad_param(family.name(), "lambda", v[0], "lambda > 0");
            break;
        case FamilyKind::Categorical: {
            double sum = 0.0;
            for (double p : v) {
                if (!(p >= 0.0 && p <= 1.0)) bad_param(family.name(), "pi", p, "pi_k in [0,1]");
                sum += p;
            }
            if (std::abs(sum - 1.0) > 1e-12) bad_param(family.name(), "pi", sum, "sum(pi) == 1 within 1e-12");
            break;
        }
    }
}

NaturalBounds natural_domain(Family family) {
    NaturalBounds b{{-kInf, -kInf}, {kInf, kInf}};
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            b.hi[1] = 0.0;
            break;
        case FamilyKind::Gamma:
            b.lo[0] = -1.0;
            b.hi[1] = 0.0;
            break;
        case FamilyKind::InverseGaussian:
            b.hi[0] = 0.0;
            b.hi[1] = 0.0;
            break;
        case FamilyKind::InverseGamma:
            b.hi[0] = -1.0;
            b.hi[1] = 0.0;
            break;
        case FamilyKind::Exponential:
        case FamilyKind::Rayleigh:
            b.hi[0] = 0.0;
            break;
        default:
            break;  // discrete natural domains are unconstrained
    }
    return b;
}

void validate_natural(Family family, const NaturalParams& nat) {
    const auto& v = nat.values;
    if (static_cast<int>(v.size()) != family.param_count()) {
        throw Error(errc::invalid_parameter, family.name() + ": expected " + std::to_string(family.param_count()) +
                                                 " natural parameters, got " + std::to_string(v.size()));
    }
    for (double x : v) {
        if (!std::isfinite(x)) {
            throw Error(errc::invalid_parameter, family.name() + ": non-finite natural parameter");
        }
    }
    if (family.kind == FamilyKind::Categorical) {
        return;
    }
    const NaturalBounds b = natural_domain(family);
    for (int i = 0; i < family.param_count(); ++i) {
        if (!(v[i] > b.lo[i] && v[i] < b.hi[i])) {
            bad_param(family.name(), "eta" + std::to_string(i + 1), v[i], "natural-domain constraint");
        }
    }
}

// --- Parameter maps ---------------------------------------------------------------

NaturalParams to_natural(Family family, const CanonicalParams& canon) {
    validate_canonical(family, canon);
    const auto& t = canon.values;
    NaturalParams nat;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            nat.values = {t[0] / t[1], -1.0 / (2.0 * t[1])};
            break;
        case FamilyKind::Gamma:
            nat.values = {t[0] - 1.0, -t[1]};
            break;
        case FamilyKind::InverseGaussian:
            nat.values = {-t[1] / (2.0 * t[0] * t[0]), -t[1] / 2.0};
            break;
        case FamilyKind::InverseGamma:
            nat.values = {-t[0] - 1.0, -t[1]};
            break;
        case FamilyKind::Exponential:
            nat.values = {-t[0]};
            break;
        case FamilyKind::Rayleigh:
            nat.values = {-1.0 / (t[0] * t[0])};
            break;
        case FamilyKind::Bernoulli:
            if (!(t[0] > 0.0 && t[0] < 1.0)) bad_param(family.name(), "p", t[0], "p strictly inside (0,1)");
            nat.values = {std::log(t[0] / (1.0 - t[0]))};
            break;
        case FamilyKind::Poisson:
            nat.values = {std::log(t[0])};
            break;
        case FamilyKind::Categorical:
            nat.values.reserve(t.size());
            for (double p : t) {
                if (!(p > 0.0)) bad_param(family.name(), "pi", p, "pi_k strictly positive");
                nat.values.push_back(std::log(p));
            }
            break;
    }
    return nat;
}

CanonicalParams from_natural(Family family, const NaturalParams& nat) {
    validate_natural(family, nat);
    const auto& e = nat.values;
    CanonicalParams canon;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            canon.values = {-e[0] / (2.0 * e[1]), -1.0 / (2.0 * e[1])};
            break;
        case FamilyKind::Gamma:
            canon.values = {e[0] + 1.0, -e[1]};
            break;
        case FamilyKind::InverseGaussian:
            canon.values = {std::sqrt(e[1] / e[0]), -2.0 * e[1]};
            break;
        case FamilyKind::InverseGamma:
            canon.values = {-e[0] - 1.0, -e[1]};
            break;
        case FamilyKind::Exponential:
            canon.values = {-e[0]};
            break;
        case FamilyKind::Rayleigh:
            canon.values = {std::sqrt(-1.0 / e[0])};
            break;
        case FamilyKind::Bernoulli:
            canon.values = {1.0 / (1.0 + std::exp(-e[0]))};
            break;
        case FamilyKind::Poisson:
            canon.values = {std::exp(e[0])};
            break;
        case FamilyKind::Categorical: {
            // Softmax with max subtraction; the overcomplete logits normalize out.
            const double m = *std::max_element(e.begin(), e.end());
            double z = 0.0;
            for (double v : e) z += std::exp(v - m);
            canon.values.reserve(e.size());
            for (double v : e) canon.values.push_back(std::exp(v - m) / z);
            break;
        }
    }
    return canon;
}

// --- Support, statistics, densities -----------------------------------------------

bool in_support(Family family, double x) {
    if (!std::isfinite(x)) return false;
    switch (family.kind) {
        case FamilyKind::Normal:
            return true;
        case FamilyKind::LogNormal:
        case FamilyKind::Gamma:
        case FamilyKind::InverseGaussian:
        case FamilyKind::InverseGamma:
            return x > 0.0;
        case FamilyKind::Exponential:
        case FamilyKind::Rayleigh:
            return x >= 0.0;
        case FamilyKind::Bernoulli:
            return x == 0.0 || x == 1.0;
        case FamilyKind::Poisson:
            return x >= 0.0 && x == std::floor(x);
        case FamilyKind::Categorical:
            return x == std::floor(x) && x >= 0.0 && x < static_cast<double>(family.k);
    }
    return false;
}

std::vector<double> sufficient_stats(Family family, double x) {
    switch (family.kind) {
        case FamilyKind::Normal:
            return {x, x * x};
        case FamilyKind::LogNormal: {
            const double lx = std::log(x);
            return {lx, lx * lx};
        }
        case FamilyKind::Gamma:
            return {std::log(x), x};
        case FamilyKind::InverseGaussian:
            return {x, 1.0 / x};
        case FamilyKind::InverseGamma:
            return {std::log(x), 1.0 / x};
        case FamilyKind::Exponential:
            return {x};
        case FamilyKind::Rayleigh:
            return {x * x / 2.0};
        case FamilyKind::Bernoulli:
        case FamilyKind::Poisson:
            return {x};
        case FamilyKind::Categorical: {
            std::vector<double> t(family.k, 0.0);
            t[static_cast<int>(x)] = 1.0;
            return t;
        }
    }
    return {};
}

double log_base_measure(Family family, double x) {
    switch (family.kind) {
        case FamilyKind::Normal:
            return -kHalfLog2Pi;
        case FamilyKind::LogNormal:
            return -kHalfLog2Pi - std::log(x);
        case FamilyKind::InverseGaussian:
            return -kHalfLog2Pi - 1.5 * std::log(x);
        case FamilyKind::Rayleigh:
            return std::log(x);
        case FamilyKind::Poisson:
            return -log_gamma(x + 1.0);
        default:
            return 0.0;
    }
}

double log_partition(Family family, const NaturalParams& nat) {
    const auto& e = nat.values;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            return -e[0] * e[0] / (4.0 * e[1]) - 0.5 * std::log(-2.0 * e[1]);
        case FamilyKind::Gamma:
            return log_gamma(e[0] + 1.0) - (e[0] + 1.0) * std::log(-e[1]);
        case FamilyKind::InverseGaussian:
            return -2.0 * std::sqrt(e[0] * e[1]) - 0.5 * std::log(-2.0 * e[1]);
        case FamilyKind::InverseGamma:
            return log_gamma(-e[0] - 1.0) - (-e[0] - 1.0) * std::log(-e[1]);
        case FamilyKind::Exponential:
        case FamilyKind::Rayleigh:
            return -std::log(-e[0]);
        case FamilyKind::Bernoulli:
            // log(1 + exp(eta)) without overflow.
            return e[0] > 0.0 ? e[0] + std::log1p(std::exp(-e[0])) : std::log1p(std::exp(e[0]));
        case FamilyKind::Poisson:
            return std::exp(e[0]);
        case FamilyKind::Categorical: {
            const double m = *std::max_element(e.begin(), e.end());
            double z = 0.0;
            for (double v : e) z += std::exp(v - m);
            return m + std::log(z);
        }
    }
    return 0.0;
}

std::vector<double> log_partition_grad(Family family, const NaturalParams& nat) {
    const auto& e = nat.values;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            return {-e[0] / (2.0 * e[1]), e[0] * e[0] / (4.0 * e[1] * e[1]) - 1.0 / (2.0 * e[1])};
        case FamilyKind::Gamma:
            return {digamma(e[0] + 1.0) - std::log(-e[1]), (e[0] + 1.0) / (-e[1])};
        case FamilyKind::InverseGaussian:
            return {std::sqrt(e[1] / e[0]), std::sqrt(e[0] / e[1]) - 1.0 / (2.0 * e[1])};
        case FamilyKind::InverseGamma:
            return {std::log(-e[1]) - digamma(-e[0] - 1.0), (e[0] + 1.0) / e[1]};
        case FamilyKind::Exponential:
        case FamilyKind::Rayleigh:
            return {-1.0 / e[0]};
        case FamilyKind::Bernoulli:
            return {1.0 / (1.0 + std::exp(-e[0]))};
        case FamilyKind::Poisson:
            return {std::exp(e[0])};
        case FamilyKind::Categorical:
            return from_natural(family, nat).values;
    }
    return {};
}

double log_pdf(Family family, const NaturalParams& nat, double x) {
    validate_natural(family, nat);
    if (!in_support(family, x)) {
        throw Error(errc::support, family.name() + ": x = " + std::to_string(x) + " outside the support");
    }
    const std::vector<double> t = sufficient_stats(family, x);
    double dot = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        dot += nat.values[i] * t[i];
    }
    return log_base_measure(family, x) + dot - log_partition(family, nat);
}

// --- Empirical fitting ------------------------------------------------------------

CanonicalParams fit_empirical(Family family, std::span<const double> data,
                              std::span<const std::uint8_t> mask) {
    std::vector<double> x;
    x.reserve(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (mask.empty() || mask[i]) {
            x.push_back(data[i]);
        }
    }
    if (x.size() < 2) {
        throw Error(errc::degenerate_column,
                    family.name() + ": need at least 2 present observations, got " + std::to_string(x.size()));
    }
    for (double v : x) {
        if (!in_support(family, v)) {
            throw Error(errc::support, family.name() + ": observation " + std::to_string(v) + " outside the support");
        }
    }
    const double n = static_cast<double>(x.size());

    CanonicalParams canon;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal: {
            std::vector<double> y = x;
            if (family.kind == FamilyKind::LogNormal) {
                for (double& v : y) v = std::log(v);
            }
            const double m = mean_of(y);
            double var = 0.0;
            for (double v : y) var += (v - m) * (v - m);
            var /= n;  // population convention
            if (!(var > 0.0)) {
                throw Error(errc::degenerate_column, family.name() + ": zero variance (" + std::to_string(var) + ")");
            }
            canon.values = {m, var};
            break;
        }
        case FamilyKind::Exponential: {
            const double m = mean_of(x);
            if (!(m > 0.0)) {
                throw Error(errc::degenerate_column, family.name() + ": zero mean (" + std::to_string(m) + ")");
            }
            canon.values = {1.0 / m};
            break;
        }
        case FamilyKind::Rayleigh: {
            double m2 = 0.0;
            for (double v : x) m2 += v * v;
            m2 /= n;
            if (!(m2 > 0.0)) {
                throw Error(errc::degenerate_column, family.name() + ": zero second moment");
            }
            canon.values = {std::sqrt(m2 / 2.0)};
            break;
        }
        case FamilyKind::InverseGaussian: {
            const double m = mean_of(x);
            double mr = 0.0;
            for (double v : x) mr += 1.0 / v;
            mr /= n;
            const double gap = mr - 1.0 / m;
            if (!(gap > 0.0)) {
                throw Error(errc::degenerate_column,
                            family.name() + ": harmonic-arithmetic gap " + std::to_string(gap) + " not positive");
            }
            canon.values = {m, 1.0 / gap};
            break;
        }
        case FamilyKind::Gamma: {
            const GammaFit fit = fit_gamma_moments(x, "gamma");
            canon.values = {fit.alpha, fit.beta};
            break;
        }
        case FamilyKind::InverseGamma: {
            std::vector<double> inv(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) inv[i] = 1.0 / x[i];
            const GammaFit fit = fit_gamma_moments(inv, "invgamma");
            canon.values = {fit.alpha, fit.beta};
            break;
        }
        case FamilyKind::Bernoulli:
            canon.values = {mean_of(x)};
            break;
        case FamilyKind::Poisson: {
            const double m = mean_of(x);
            if (!(m > 0.0)) {
                throw Error(errc::degenerate_column, family.name() + ": zero mean (" + std::to_string(m) + ")");
            }
            canon.values = {m};
            break;
        }
        case FamilyKind::Categorical: {
            std::vector<double> freq(family.k, 0.0);
            for (double v : x) freq[static_cast<int>(v)] += 1.0;
            for (double& f : freq) f /= n;
            canon.values = freq;
            break;
        }
    }
    return canon;
}

// --- Scaling ----------------------------------------------------------------------

namespace {

NaturalParams apply_scale(Family family, const NaturalParams& nat, double omega, bool invert) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(errc::invalid_scale, family.name() + ": omega must be positive, got " + std::to_string(omega));
    }
    const ScalingLaw law = scaling_law(family);  // throws for discrete families
    NaturalParams out = nat;
    for (int i = 0; i < law.size(); ++i) {
        const double fi = law.f(i, omega);
        out.values[i] = invert ? nat.values[i] * fi : nat.values[i] / fi;
    }
    return out;
}

}  // namespace

NaturalParams scale_natural(Family family, const NaturalParams& nat, double omega) {
    return apply_scale(family, nat, omega, /*invert=*/false);
}

NaturalParams unscale_natural(Family family, const NaturalParams& nat_scaled, double omega) {
    return apply_scale(family, nat_scaled, omega, /*invert=*/true);
}

std::vector<double> transform_data(Family family, std::span<const double> data, double omega) {
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw Error(errc::invalid_scale, family.name() + ": omega must be positive, got " + std::to_string(omega));
    }
    const ScalingLaw law = scaling_law(family);
    std::vector<double> out(data.begin(), data.end());
    if (law.transform == DataTransform::Power) {
        for (double& v : out) {
            if (!(v > 0.0)) {
                throw Error(errc::support, family.name() + ": power transform requires x > 0, got " + std::to_string(v));
            }
            v = std::pow(v, omega);
        }
    } else {
        for (double& v : out) {
            v *= omega;
        }
    }
    return out;
}

double family_variance(Family family, const CanonicalParams& canon) {
    validate_canonical(family, canon);
    const auto& t = canon.values;
    switch (family.kind) {
        case FamilyKind::Normal:
        case FamilyKind::LogNormal:
            return t[1];  // LogNormal: variance of log x by the log-space convention
        case FamilyKind::Gamma:
            return t[0] / (t[1] * t[1]);
        case FamilyKind::InverseGaussian:
            return t[0] * t[0] * t[0] / t[1];
        case FamilyKind::InverseGamma: {
            if (!(t[0] > 2.0)) {
                throw Error(errc::invalid_parameter,
                            family.name() + ": variance undefined for alpha <= 2 (alpha = " + std::to_string(t[0]) + ")");
            }
            const double am1 = t[0] - 1.0;
            return t[1] * t[1] / (am1 * am1 * (t[0] - 2.0));
        }
        case FamilyKind::Exponential:
            return 1.0 / (t[0] * t[0]);
        case FamilyKind::Rayleigh:
            return (4.0 - 3.14159265358979323846) / 2.0 * t[0] * t[0];
        case FamilyKind::Bernoulli:
            return t[0] * (1.0 - t[0]);
        case FamilyKind::Poisson:
            return t[0];
        case FamilyKind::Categorical:
            throw Error(errc::unsupported_family, "categorical has no scalar variance");
    }
    return 0.0;
}

}  // namespace lipstd::expfam
