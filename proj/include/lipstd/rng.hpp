#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace lipstd {

// Seeded sampler with a fully specified generator (mt19937_64) and hand-rolled
// variate transforms, so identical seeds give identical streams on every
// platform. Column-level streams are derived from a root seed with split().
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Derive an independent deterministic stream (splitmix64 of root ^ stream index).
    static Rng split(std::uint64_t root_seed, std::uint64_t stream);

    /// The seed split() would use, for recording in metadata.
    static std::uint64_t derive_seed(std::uint64_t root_seed, std::uint64_t stream);

    /// Uniform draw strictly inside (0, 1).
    double uniform();

    double normal();  // standard normal, Box-Muller
    double normal(double mu, double sigma) { return mu + sigma * normal(); }
    double exponential(double lambda);
    double gamma(double shape, double rate);  // Marsaglia-Tsang
    double beta(double a, double b);          // ratio of two gamma draws
    double lognormal(double mu, double sigma);
    double rayleigh(double sigma);
    double inverse_gaussian(double mu, double lambda);
    double inverse_gamma(double shape, double scale);
    long poisson(double lambda);
    int bernoulli(double p);
    int categorical(std::span<const double> pi);

private:
    std::mt19937_64 gen_;
};

}  // namespace lipstd
