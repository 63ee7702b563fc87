#include "lipstd/rng.hpp"

#include <cmath>

namespace lipstd {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr double kTwoPi = 6.2831853071795864769;

}  // namespace

Rng Rng::split(std::uint64_t root_seed, std::uint64_t stream) {
    return Rng(derive_seed(root_seed, stream));
}

std::uint64_t Rng::derive_seed(std::uint64_t root_seed, std::uint64_t stream) {
    return splitmix64(root_seed ^ splitmix64(stream + 1));
}

double Rng::uniform() {
    // 53-bit mantissa, offset by half a step so 0 and 1 are never returned.
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double Rng::exponential(double lambda) { return -std::log(uniform()) / lambda; }

double Rng::gamma(double shape, double rate) {
    if (shape < 1.0) {
        // Boost to shape+1 and correct with a power of a uniform.
        const double u = uniform();
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x;
        double v;
        do {
            x = normal();
            v = 1.0 + c * x;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) {
            return d * v / rate;
        }
        if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
            return d * v / rate;
        }
    }
}

double Rng::beta(double a, double b) {
    const double ga = gamma(a, 1.0);
    const double gb = gamma(b, 1.0);
    return ga / (ga + gb);
}

double Rng::lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

double Rng::rayleigh(double sigma) { return sigma * std::sqrt(-2.0 * std::log(uniform())); }

double Rng::inverse_gaussian(double mu, double lambda) {
    // Michael-Schucany-Haas.
    const double z = normal();
    const double y = z * z;
    const double x = mu + mu * mu * y / (2.0 * lambda) -
                     mu / (2.0 * lambda) * std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (uniform() <= mu / (mu + x)) {
        return x;
    }
    return mu * mu / x;
}

double Rng::inverse_gamma(double shape, double scale) { return 1.0 / gamma(shape, scale); }

long Rng::poisson(double lambda) {
    // Count unit-rate exponential arrivals inside [0, lambda]; O(lambda) but
    // exact and underflow-free for any rate.
    long k = -1;
    double t = 0.0;
    while (t <= lambda) {
        t += -std::log(uniform());
        ++k;
    }
    return k;
}

int Rng::bernoulli(double p) { return uniform() < p ? 1 : 0; }

int Rng::categorical(std::span<const double> pi) {
    const double u = uniform();
    double cum = 0.0;
    for (std::size_t k = 0; k < pi.size(); ++k) {
        cum += pi[k];
        if (u < cum) {
            return static_cast<int>(k);
        }
    }
    return static_cast<int>(pi.size()) - 1;
}

}  // namespace lipstd
