#include "irg/rng.hpp"

#include <cmath>

namespace irg {

namespace {

std::uint64_t poisson_inversion(RandomState& rng, double mean)
{
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    // The loop terminates once cdf reaches u; the guard covers the rounding
    // case where the accumulated cdf stalls just below 1.
    while (u > cdf && k < 1000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

std::uint64_t poisson_ptrs(RandomState& rng, double mean)
{
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);

    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::uint64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
        const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
        if (lhs <= rhs) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

} // namespace

std::uint64_t sample_poisson(RandomState& rng, double mean)
{
    if (!(mean > 0.0)) {
        return 0;
    }
    if (mean <= kPoissonInversionLimit) {
        return poisson_inversion(rng, mean);
    }
    return poisson_ptrs(rng, mean);
}

} // namespace irg
