#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipstd/error.hpp"

namespace lipstd::expfam {

enum class FamilyKind {
    Normal,
    LogNormal,
    Gamma,
    InverseGaussian,
    InverseGamma,
    Exponential,
    Rayleigh,
    Bernoulli,
    Poisson,
    Categorical,
};

/// One of the supported exponential-family likelihoods. Continuous kinds carry
/// a data-scaling law; Bernoulli/Poisson/Categorical are handled via tricks.
struct Family {
    FamilyKind kind = FamilyKind::Normal;
    int k = 0;  // number of classes, Categorical only (k >= 2)

    Family() = default;
    Family(FamilyKind kind_);  // NOLINT(google-explicit-constructor)
    static Family categorical(int k);

    bool is_continuous() const;
    bool is_discrete() const { return !is_continuous(); }
    /// Number of natural parameters (2 for two-parameter families, k for
    /// Categorical, 1 otherwise).
    int param_count() const;
    std::string name() const;

    bool operator==(const Family&) const = default;
};

Family family_from_name(const std::string& name);

/// Conventional parameters, in the usual textbook order:
///   Normal/LogNormal (mu, sigma^2), Gamma/InverseGamma (alpha, beta),
///   InverseGaussian (mu, lambda), Exponential (lambda), Rayleigh (sigma),
///   Bernoulli (p), Poisson (lambda), Categorical (pi_1..pi_K).
struct CanonicalParams {
    std::vector<double> values;
};

/// Natural parameters eta of h(x) exp[eta^T T(x) - A(eta)].
struct NaturalParams {
    std::vector<double> values;
};

enum class DataTransform { Linear, Power };  // x~ = omega*x  or  x~ = x^omega

/// Per-family factorization T_i(x~) = f_i(omega) T_i(x) + g_i(omega) of the
/// sufficient statistics under the family's data transform.
struct ScalingLaw {
    Family family;
    DataTransform transform = DataTransform::Linear;

    int size() const { return family.param_count(); }
    double f(int i, double omega) const;  // multiplicative factor
    double g(int i, double omega) const;  // additive offset
};

/// Scaling law per Prop-style factorization; discrete families have none.
ScalingLaw scaling_law(Family family);

// --- Parameter maps and densities -------------------------------------------------

NaturalParams to_natural(Family family, const CanonicalParams& canon);
CanonicalParams from_natural(Family family, const NaturalParams& nat);

/// Validation helpers; throw Error(invalid_parameter) naming the offending field.
void validate_canonical(Family family, const CanonicalParams& canon);
void validate_natural(Family family, const NaturalParams& nat);

/// Lower/upper bounds of the natural domain per parameter (+-inf when open).
struct NaturalBounds {
    std::array<double, 2> lo;
    std::array<double, 2> hi;
};
NaturalBounds natural_domain(Family family);

bool in_support(Family family, double x);

std::vector<double> sufficient_stats(Family family, double x);
double log_base_measure(Family family, double x);
double log_partition(Family family, const NaturalParams& nat);
/// Gradient of the log-partition, i.e. E[T_i(x)] under eta.
std::vector<double> log_partition_grad(Family family, const NaturalParams& nat);

double log_pdf(Family family, const NaturalParams& nat, double x);

/// Moment-style closed-form fit at the point where smoothness is measured.
/// Entries with mask==0 are ignored; an empty mask means all present.
CanonicalParams fit_empirical(Family family, std::span<const double> data,
                              std::span<const std::uint8_t> mask = {});

/// eta~ with eta~_i = eta_i / f_i(omega).
NaturalParams scale_natural(Family family, const NaturalParams& nat, double omega);
/// Exact inverse of scale_natural: eta_i = f_i(omega) * eta~_i.
NaturalParams unscale_natural(Family family, const NaturalParams& nat_scaled, double omega);

/// Element-wise x~ = omega*x (x^omega for LogNormal).
std::vector<double> transform_data(Family family, std::span<const double> data, double omega);

/// Variance of the family at the given canonical parameters (used to derive
/// the standardizing omega). For LogNormal this is the variance of log x,
/// since scaling acts linearly in log space.
double family_variance(Family family, const CanonicalParams& canon);

}  // namespace lipstd::expfam
