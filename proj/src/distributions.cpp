#include "irg/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "irg/error.hpp"
#include "irg/rng.hpp"

namespace irg {

double CountDistribution::mean() const noexcept
{
    double m = 0.0;
    for (std::size_t i = 0; i < pmf.size(); ++i) {
        m += static_cast<double>(i) * pmf[i];
    }
    return m;
}

CountDistribution poisson_law(double alpha, std::size_t cutoff)
{
    if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
        throw DomainError("Poisson parameter must be finite and nonnegative");
    }
    CountDistribution law;
    law.kind = CountDistribution::Kind::Poisson;
    law.alpha = alpha;
    if (alpha == 0.0) {
        law.pmf.assign(std::max<std::size_t>(cutoff, 0) + 1, 0.0);
        law.pmf[0] = 1.0;
        return law;
    }
    const double log_alpha = std::log(alpha);
    auto term = [&](std::size_t i) {
        const double x = static_cast<double>(i);
        return std::exp(-alpha + x * log_alpha - std::lgamma(x + 1.0));
    };
    auto guess = static_cast<std::size_t>(std::ceil(alpha + 10.0 * std::sqrt(alpha) + 20.0));
    const std::size_t initial = std::max(cutoff, guess);
    law.pmf.reserve(initial + 1);
    double total = 0.0;
    for (std::size_t i = 0; i <= initial; ++i) {
        law.pmf.push_back(term(i));
        total += law.pmf.back();
    }
    while (1.0 - total >= kPoissonTailTolerance && law.pmf.size() < 100000000) {
        law.pmf.push_back(term(law.pmf.size()));
        total += law.pmf.back();
    }
    law.tail_mass = std::max(0.0, 1.0 - total);
    return law;
}

CountDistribution empirical_law(std::span<const std::uint64_t> samples)
{
    if (samples.empty()) {
        throw DomainError("empirical_law needs at least one sample");
    }
    const std::uint64_t top = *std::max_element(samples.begin(), samples.end());
    if (top > 100000000) {
        throw CapabilityError("empirical_law supports values up to 1e8");
    }
    CountDistribution law;
    law.kind = CountDistribution::Kind::Empirical;
    law.samples = samples.size();
    std::vector<std::uint64_t> counts(top + 1, 0);
    for (std::uint64_t x : samples) {
        ++counts[x];
    }
    const double n = static_cast<double>(samples.size());
    law.pmf.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        law.pmf[i] = static_cast<double>(counts[i]) / n;
    }
    return law;
}

namespace {

double cell(const CountDistribution& d, std::size_t i) noexcept
{
    return i < d.pmf.size() ? d.pmf[i] : 0.0;
}

} // namespace

double tv_distance(const CountDistribution& p, const CountDistribution& q)
{
    const std::size_t length = std::max(p.pmf.size(), q.pmf.size());
    double l1 = std::fabs(p.tail_mass - q.tail_mass);
    for (std::size_t i = 0; i < length; ++i) {
        l1 += std::fabs(cell(p, i) - cell(q, i));
    }
    return std::min(1.0, 0.5 * l1);
}

double wasserstein_distance(const CountDistribution& p, const CountDistribution& q)
{
    const std::size_t length = std::max(p.pmf.size(), q.pmf.size());
    double fp = 0.0;
    double fq = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < length; ++i) {
        fp += cell(p, i);
        fq += cell(q, i);
        total += std::fabs(fp - fq);
    }
    return total;
}

FactorialMoment factorial_moment(std::span<const std::uint64_t> samples, unsigned order)
{
    if (order < 1) {
        throw DomainError("factorial moment order must be >= 1");
    }
    if (samples.empty()) {
        throw DomainError("factorial_moment needs at least one sample");
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::uint64_t x : samples) {
        double v = 1.0;
        for (unsigned i = 0; i < order; ++i) {
            v *= static_cast<double>(x) - static_cast<double>(i);
        }
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(samples.size());
    FactorialMoment fm;
    fm.estimate = sum / n;
    if (samples.size() > 1) {
        const double var = std::max(0.0, (sum_sq - n * fm.estimate * fm.estimate) / (n - 1.0));
        fm.std_error = std::sqrt(var / n);
    }
    return fm;
}

double standard_normal_cdf(double z)
{
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

NormalityReport normality_diagnostic(std::span<const std::uint64_t> samples, double alpha_hat)
{
    if (!(alpha_hat > 0.0)) {
        throw DomainError("normality_diagnostic needs alpha_hat > 0");
    }
    if (samples.empty()) {
        throw DomainError("normality_diagnostic needs at least one sample");
    }
    NormalityReport report;
    report.degenerate = std::all_of(samples.begin(), samples.end(),
                                    [&](std::uint64_t x) { return x == samples.front(); });
    const double n = static_cast<double>(samples.size());
    const double root = std::sqrt(alpha_hat);
    constexpr std::array<double, 3> zs{-1.0, 0.0, 1.0};
    for (std::size_t k = 0; k < zs.size(); ++k) {
        const double threshold = alpha_hat + zs[k] * root;
        std::size_t below = 0;
        std::size_t at_or_below = 0;
        for (std::uint64_t x : samples) {
            const auto v = static_cast<double>(x);
            below += v < threshold ? 1 : 0;
            at_or_below += v <= threshold ? 1 : 0;
        }
        NormalityPoint& p = report.points[k];
        p.z = zs[k];
        p.cdf_below = static_cast<double>(below) / n;
        p.cdf = static_cast<double>(at_or_below) / n;
        p.cdf_mid = 0.5 * (p.cdf_below + p.cdf);
        p.target = standard_normal_cdf(zs[k]);
        report.max_deviation = std::max(report.max_deviation, std::fabs(p.cdf_mid - p.target));
    }
    return report;
}

namespace {

std::vector<std::uint64_t> resample(std::span<const std::uint64_t> samples, RandomState& rng)
{
    std::vector<std::uint64_t> out(samples.size());
    for (auto& x : out) {
        x = samples[rng.below(samples.size())];
    }
    return out;
}

Interval percentile_interval(std::vector<double> values, double level)
{
    std::sort(values.begin(), values.end());
    const double tail = 0.5 * (1.0 - level);
    auto at = [&](double q) {
        const double pos = q * static_cast<double>(values.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, values.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] * (1.0 - frac) + values[hi] * frac;
    };
    return {at(tail), at(1.0 - tail)};
}

void check_bootstrap(const BootstrapOptions& options)
{
    if (options.resamples < 2) {
        throw ConfigError("bootstrap needs at least two resamples");
    }
    if (!(options.level > 0.0 && options.level < 1.0)) {
        throw ConfigError("bootstrap level must lie in (0,1)");
    }
}

} // namespace

Interval bootstrap_tv_interval(std::span<const std::uint64_t> samples,
                               const CountDistribution& target, const BootstrapOptions& options)
{
    check_bootstrap(options);
    if (samples.empty()) {
        throw DomainError("bootstrap needs at least one sample");
    }
    RandomState rng(derive_key(options.seed, stream::kBootstrap));
    std::vector<double> values;
    values.reserve(options.resamples);
    for (std::size_t b = 0; b < options.resamples; ++b) {
        const auto draw = resample(samples, rng);
        values.push_back(tv_distance(empirical_law(draw), target));
    }
    return percentile_interval(std::move(values), options.level);
}

Interval bootstrap_tv_interval(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b,
                               const BootstrapOptions& options)
{
    check_bootstrap(options);
    if (a.empty() || b.empty()) {
        throw DomainError("bootstrap needs at least one sample on each side");
    }
    RandomState rng(derive_key(options.seed, stream::kBootstrap));
    std::vector<double> values;
    values.reserve(options.resamples);
    for (std::size_t r = 0; r < options.resamples; ++r) {
        const auto da = resample(a, rng);
        const auto db = resample(b, rng);
        values.push_back(tv_distance(empirical_law(da), empirical_law(db)));
    }
    return percentile_interval(std::move(values), options.level);
}

} // namespace irg
