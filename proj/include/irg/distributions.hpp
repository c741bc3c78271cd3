#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace irg {

// A law on {0, 1, 2, ...}: explicit pmf over {0..cutoff} plus the remaining
// mass beyond the cutoff.
struct CountDistribution {
    enum class Kind { Poisson, Empirical };

    std::vector<double> pmf;
    double tail_mass = 0.0;
    Kind kind = Kind::Empirical;
    double alpha = 0.0; // Poisson parameter
    std::size_t samples = 0; // empirical sample size

    std::size_t cutoff() const noexcept { return pmf.empty() ? 0 : pmf.size() - 1; }
    double mean() const noexcept;
};

inline constexpr double kPoissonTailTolerance = 1e-10;

// Exact Poisson(alpha) pmf. The cutoff is extended until the tail mass falls
// below kPoissonTailTolerance. alpha = 0 gives the point mass at zero.
CountDistribution poisson_law(double alpha, std::size_t cutoff = 0);

CountDistribution empirical_law(std::span<const std::uint64_t> samples);

// Total variation in the sup-over-sets normalization (half the L1 distance of
// the pmfs). Mass beyond the longer cutoff is compared as a single cell.
double tv_distance(const CountDistribution& p, const CountDistribution& q);

// Sum over i of |F_P(i) - F_Q(i)|.
double wasserstein_distance(const CountDistribution& p, const CountDistribution& q);

struct FactorialMoment {
    double estimate = 0.0;
    double std_error = 0.0;
};

// Sample mean of the descending factorial n (n-1) ... (n-l+1).
FactorialMoment factorial_moment(std::span<const std::uint64_t> samples, unsigned order);

double standard_normal_cdf(double z);

struct NormalityPoint {
    double z = 0.0;
    double cdf_below = 0.0; // fraction of standardized samples < z
    double cdf = 0.0; // fraction <= z
    double cdf_mid = 0.0; // continuity-corrected: below + half the atom at z
    double target = 0.0; // Phi(z)
};

struct NormalityReport {
    std::array<NormalityPoint, 3> points{}; // z = -1, 0, 1
    bool degenerate = false; // all samples equal
    double max_deviation = 0.0; // max |cdf_mid - target|
};

// Standardizes by (x - alpha_hat) / sqrt(alpha_hat) and compares the
// empirical CDF with Phi at z in {-1, 0, 1}.
NormalityReport normality_diagnostic(std::span<const std::uint64_t> samples, double alpha_hat);

struct Interval {
    double lower = 0.0;
    double upper = 0.0;
};

struct BootstrapOptions {
    std::size_t resamples = 200;
    double level = 0.95;
    std::uint64_t seed = 0xB007;
};

// Percentile bootstrap interval for tv_distance(empirical(samples), target).
Interval bootstrap_tv_interval(std::span<const std::uint64_t> samples,
                               const CountDistribution& target, const BootstrapOptions& options = {});

// Same for the distance between two independent empirical samples.
Interval bootstrap_tv_interval(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                               const BootstrapOptions& options = {});

} // namespace irg
