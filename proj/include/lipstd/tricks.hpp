#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lipstd/expfam.hpp"
#include "lipstd/rng.hpp"

namespace lipstd::tricks {

/// Additive-noise configuration for the gamma trick. Draws lie strictly in
/// (0,1) so the original natural number stays identifiable (floor(x~) == x).
struct NoiseConfig {
    double beta_a = 1.1;
    double beta_b = 30.0;
    std::uint64_t seed = 0;

    double mean() const { return beta_a / (beta_a + beta_b); }
};

enum class TrickKind { Gamma, Bernoulli, BernoulliThenGamma };

std::string trick_name(TrickKind t);
TrickKind trick_from_name(const std::string& name);

/// Provenance of a trick application; serialized into the metadata sidecar so
/// the discrete parameters can be recovered without the data.
struct TrickRecord {
    std::string source_column;
    TrickKind trick = TrickKind::Gamma;
    std::vector<std::string> group;  // produced column ids, size 1 or K
    NoiseConfig noise;
    expfam::Family original_family;
};

struct BernoulliTrickResult {
    std::vector<std::vector<double>> columns;        // K one-hot columns
    std::vector<std::vector<std::uint8_t>> present;  // masks, missing in all K
};

/// One-hot expansion of a categorical column coded 0..K-1 (class order is the
/// ascending code order).
BernoulliTrickResult apply_bernoulli_trick(std::span<const double> column,
                                           std::span<const std::uint8_t> present, int k);

struct GammaTrickResult {
    std::vector<double> values;          // x + eps, strictly positive where present
    std::vector<std::uint8_t> present;   // unchanged mask
    expfam::CanonicalParams gamma_fit;   // scaling anchor for the noised column
};

/// Natural-number column -> continuous column via seeded Beta additive noise,
/// plus the Gamma moment fit of the result.
GammaTrickResult apply_gamma_trick(std::span<const double> column,
                                   std::span<const std::uint8_t> present,
                                   const NoiseConfig& noise);

/// Mean matching: p = clamp(alpha/beta - E[eps], 0, 1).
double recover_bernoulli(const expfam::CanonicalParams& gamma_params, const NoiseConfig& noise);

/// Mean matching with a positivity floor: lambda = max(delta, alpha/beta - E[eps]).
double recover_poisson(const expfam::CanonicalParams& gamma_params, const NoiseConfig& noise,
                       double delta = 1e-6);

struct CategoricalRecovery {
    std::vector<double> pi;
    bool degenerate = false;  // all class means were zero; uniform returned
};

/// pi_k = mu_k / sum(mu); means are recovered per-class Bernoulli p's.
CategoricalRecovery recover_categorical(std::span<const double> per_class_means);

enum class DiscreteKind { Bernoulli, Poisson };

/// Simulates draw -> noise -> Gamma fit -> mean matching over a parameter grid
/// and reports the mean absolute recovery error.
double end_to_end_recovery_error(DiscreteKind kind, std::span<const double> param_grid,
                                 std::size_t n, std::uint64_t seed);

}  // namespace lipstd::tricks
