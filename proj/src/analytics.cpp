#include "irg/analytics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "irg/error.hpp"
#include "irg/rng.hpp"

namespace irg {

namespace {

// Sub-stream labels under the integration seed, one per formula.
enum Formula : std::uint64_t {
    kDegreeFormula = 1,
    kComponentFormula,
    kEdgeFormula,
    kConnectedFormula,
    kSteinFormula,
    kGammaFormula,
    kProbeFormula,
};

std::uint64_t formula_key(const IntegrationOptions& options, Formula f, std::uint64_t index = 0)
{
    return derive_key(derive_key(options.seed, stream::kIntegration), f, index);
}

void check_intensity(double s)
{
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw DomainError("intensity s must be positive and finite");
    }
}

double poisson_term(std::size_t j, double mean)
{
    if (mean <= 0.0) {
        return j == 0 ? 1.0 : 0.0;
    }
    const double x = static_cast<double>(j);
    return std::exp(-mean + x * std::log(mean) - std::lgamma(x + 1.0));
}

double falling_power_ratio(double s, std::size_t k)
{
    // s^k / k!
    return std::exp(static_cast<double>(k) * std::log(s) - std::lgamma(static_cast<double>(k) + 1.0));
}

double factorial(std::size_t k)
{
    return std::tgamma(static_cast<double>(k) + 1.0);
}

double stein_factor(double alpha)
{
    return alpha > 1.0 ? 1.0 / alpha : 1.0;
}

std::size_t inner_samples(const IntegrationOptions& options, double s, const ConnectionFunction& phi)
{
    return options.inner > 0 ? options.inner : default_inner_samples(s, phi);
}

ExpectationEstimate closed(double value)
{
    ExpectationEstimate e;
    e.value = value;
    e.method = EstimateMethod::ClosedForm;
    return e;
}

ExpectationEstimate monte_carlo(const MeanEstimate& m, double scale, std::size_t inner)
{
    ExpectationEstimate e;
    e.value = scale * m.mean;
    e.std_error = std::fabs(scale) * m.std_error;
    e.outer_samples = m.samples;
    e.inner_samples = inner;
    e.method = EstimateMethod::MonteCarlo;
    return e;
}

// int phi(z, {x_1..x_k}) mu(dz), when it has a closed form.
std::optional<double> exact_group_mean_field(const ConnectionFunction& phi,
                                             const ProbabilityMeasure& measure,
                                             std::span<const Point> xs)
{
    if (phi.family() == Family::Constant) {
        return 1.0 - std::pow(1.0 - phi.p(), static_cast<double>(xs.size()));
    }
    if (xs.size() == 1) {
        return phi.exact_mean_field(measure, xs[0]);
    }
    if (phi.family() == Family::Partition && measure.is_uniform_box()) {
        const double threshold = 1.0 / phi.s();
        if (threshold >= 1.0) {
            return 1.0;
        }
        bool low = false;
        bool high = false;
        for (const Point& x : xs) {
            (x[0] <= threshold ? low : high) = true;
        }
        return (low ? threshold : 0.0) + (high ? 1.0 - threshold : 0.0);
    }
    return std::nullopt;
}

double h_phi(const ConnectionFunction& phi, std::span<const Point> xs, const IntegrationOptions& options,
             RandomState& rng)
{
    ConnectednessOptions c = options.connectedness;
    if (c.method == ConnectednessMethod::MonteCarlo) {
        c.seed = rng.next_u64();
    }
    return connectedness_prob(PairProbabilities(phi, xs), c);
}

double constant_h(double p, std::size_t k, const ConnectednessOptions& options)
{
    PairProbabilities probs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            probs.set(i, j, p);
        }
    }
    // Enumeration sums positive terms; the recursion subtracts from 1 and
    // loses relative precision when p is small.
    if (k <= kEnumerateLimit && options.method != ConnectednessMethod::MonteCarlo) {
        return connectedness_prob(probs, {ConnectednessMethod::Enumerate});
    }
    return connectedness_prob(probs, options);
}

} // namespace

std::size_t default_inner_samples(double s, const ConnectionFunction& phi)
{
    const double scaled = s * phi.sup_phi();
    const double m = std::max(1e3, scaled * scaled * 1e2);
    return static_cast<std::size_t>(std::min(m, static_cast<double>(kMaxInnerSamples)));
}

std::string to_string(EstimateMethod method)
{
    return method == EstimateMethod::ClosedForm ? "closed-form" : "monte-carlo";
}

ExpectationEstimate expected_degree_count(double s, const ConnectionFunction& phi,
                                          const ProbabilityMeasure& measure, std::size_t j,
                                          const IntegrationOptions& options)
{
    check_intensity(s);
    if (auto levels = phi.mean_field_levels(measure)) {
        double total = 0.0;
        for (const auto& level : *levels) {
            total += level.mass * poisson_term(j, s * level.value);
        }
        return closed(s * total);
    }
    const std::size_t inner = inner_samples(options, s, phi);
    const auto m = monte_carlo_mean(options.outer, formula_key(options, kDegreeFormula, j),
                                    options.execution, [&](RandomState& rng) {
                                        const Point x = measure.sample(rng);
                                        const double g = mean_field(phi, measure, x, inner, rng).value;
                                        return poisson_term(j, s * g);
                                    });
    return monte_carlo(m, s, inner);
}

ExpectationEstimate expected_k_components(double s, const ConnectionFunction& phi,
                                          const ProbabilityMeasure& measure, std::size_t k,
                                          const IntegrationOptions& options)
{
    check_intensity(s);
    if (k == 0) {
        throw DomainError("expected_k_components needs k >= 1");
    }
    if (k == 1) {
        return expected_degree_count(s, phi, measure, 0, options);
    }
    const double coef = falling_power_ratio(s, k);
    if (phi.family() == Family::Constant) {
        const double p = phi.p();
        const double h = constant_h(p, k, options.connectedness);
        return closed(coef * h * std::exp(-s * (1.0 - std::pow(1.0 - p, static_cast<double>(k)))));
    }
    const std::size_t inner = inner_samples(options, s, phi);
    const auto m = monte_carlo_mean(
        options.outer, formula_key(options, kComponentFormula, k), options.execution,
        [&](RandomState& rng) {
            std::vector<Point> xs(k);
            for (auto& x : xs) {
                x = measure.sample(rng);
            }
            const double h = h_phi(phi, xs, options, rng);
            if (h == 0.0) {
                return 0.0;
            }
            double g = 0.0;
            if (auto exact = exact_group_mean_field(phi, measure, xs)) {
                g = *exact;
            } else {
                for (std::size_t i = 0; i < inner; ++i) {
                    const Point z = measure.sample(rng);
                    g += group_connect_prob(phi, std::span<const Point>(&z, 1), xs);
                }
                g /= static_cast<double>(inner);
            }
            return h * std::exp(-s * g);
        });
    return monte_carlo(m, coef, inner);
}

ExpectationEstimate expected_edges(double s, const ConnectionFunction& phi,
                                   const ProbabilityMeasure& measure, const IntegrationOptions& options)
{
    check_intensity(s);
    const double coef = 0.5 * s * s;
    if (auto levels = phi.mean_field_levels(measure)) {
        double total = 0.0;
        for (const auto& level : *levels) {
            total += level.mass * level.value;
        }
        return closed(coef * total);
    }
    const auto m = monte_carlo_mean(options.outer, formula_key(options, kEdgeFormula), options.execution,
                                    [&](RandomState& rng) {
                                        const Point x = measure.sample(rng);
                                        if (auto g = phi.exact_mean_field(measure, x)) {
                                            return *g;
                                        }
                                        return phi(x, measure.sample(rng));
                                    });
    return monte_carlo(m, coef, 1);
}

ExpectationEstimate expected_connected_k(double s, const ConnectionFunction& phi,
                                         const ProbabilityMeasure& measure, std::size_t k,
                                         const IntegrationOptions& options)
{
    check_intensity(s);
    if (k < 2) {
        throw DomainError("expected_connected_k needs k >= 2");
    }
    if (k == 2) {
        return expected_edges(s, phi, measure, options);
    }
    const double coef = falling_power_ratio(s, k);
    if (phi.family() == Family::Constant) {
        return closed(coef * constant_h(phi.p(), k, options.connectedness));
    }
    const auto m = monte_carlo_mean(options.outer, formula_key(options, kConnectedFormula, k),
                                    options.execution, [&](RandomState& rng) {
                                        std::vector<Point> xs(k);
                                        for (auto& x : xs) {
                                            x = measure.sample(rng);
                                        }
                                        return h_phi(phi, xs, options, rng);
                                    });
    return monte_carlo(m, coef, 0);
}

ExpectationEstimate expected_statistic(double s, const ConnectionFunction& phi,
                                       const ProbabilityMeasure& measure, const StatisticId& id,
                                       const IntegrationOptions& options)
{
    switch (id.kind) {
    case StatisticKind::Degree: return expected_degree_count(s, phi, measure, id.index, options);
    case StatisticKind::Component: return expected_k_components(s, phi, measure, id.index, options);
    case StatisticKind::ConnectedInduced: return expected_connected_k(s, phi, measure, id.index, options);
    }
    throw DomainError("unknown statistic");
}

namespace {

void finish_bound(SteinBound& b, double integral, double integral_se)
{
    // integral = gamma / k!
    const double factor = stein_factor(b.alpha);
    b.tv_bound = factor * integral;
    b.w_bound = 3.0 * (b.alpha > 1.0 ? 1.0 / std::sqrt(b.alpha) : 1.0) * integral;
    double var = factor * factor * integral_se * integral_se;
    if (b.alpha > 1.0) {
        const double d = integral / (b.alpha * b.alpha) * b.alpha_std_error;
        var += d * d;
    }
    b.std_error = std::sqrt(var);
}

} // namespace

SteinBound edge_stein_bound(double s, const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                            const IntegrationOptions& options)
{
    check_intensity(s);
    const auto edges = expected_edges(s, phi, measure, options);
    SteinBound b;
    b.k = 2;
    b.alpha = edges.value;
    b.alpha_std_error = edges.std_error;
    const double cube = s * s * s;
    if (auto levels = phi.mean_field_levels(measure)) {
        double total = 0.0;
        for (const auto& level : *levels) {
            total += level.mass * level.value * level.value;
        }
        const double integral = cube * total;
        b.method = EstimateMethod::ClosedForm;
        b.gamma = 2.0 * integral;
        finish_bound(b, integral, 0.0);
        return b;
    }
    const std::size_t inner = inner_samples(options, s, phi);
    const auto m = monte_carlo_mean(options.outer, formula_key(options, kSteinFormula), options.execution,
                                    [&](RandomState& rng) {
                                        const Point x = measure.sample(rng);
                                        if (auto g = phi.exact_mean_field(measure, x)) {
                                            return *g * *g;
                                        }
                                        // Two independent replicas keep E[A B] = g^2.
                                        double a = 0.0;
                                        double c = 0.0;
                                        for (std::size_t i = 0; i < inner; ++i) {
                                            a += phi(x, measure.sample(rng));
                                        }
                                        for (std::size_t i = 0; i < inner; ++i) {
                                            c += phi(x, measure.sample(rng));
                                        }
                                        const double n = static_cast<double>(inner);
                                        return (a / n) * (c / n);
                                    });
    b.method = EstimateMethod::MonteCarlo;
    b.gamma = 2.0 * cube * m.mean;
    b.gamma_std_error = 2.0 * cube * m.std_error;
    finish_bound(b, cube * m.mean, cube * m.std_error);
    return b;
}

Selection indicator_selection(const ConnectionFunction& phi, std::size_t k)
{
    if (!phi.is_binary()) {
        throw DomainError("indicator_selection needs a {0,1}-valued connection function");
    }
    if (k < 2) {
        throw DomainError("indicator_selection needs k >= 2");
    }
    if (k == 2) {
        return [phi](std::span<const Point> xs) { return phi(xs[0], xs[1]); };
    }
    return [phi](std::span<const Point> xs) {
        const std::size_t n = xs.size();
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{0};
        seen[0] = true;
        std::size_t reached = 1;
        while (!stack.empty()) {
            const std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (!seen[v] && phi(xs[u], xs[v]) > 0.5) {
                    seen[v] = true;
                    ++reached;
                    stack.push_back(v);
                }
            }
        }
        return reached == n ? 1.0 : 0.0;
    };
}

namespace {

inline constexpr std::size_t kSymmetryProbes = 32;
inline constexpr std::size_t kDefaultGammaInner = 10000;

void check_selection(std::size_t k, const Selection& h, const ProbabilityMeasure& measure,
                     const IntegrationOptions& options)
{
    RandomState rng(formula_key(options, kProbeFormula, k));
    std::vector<Point> xs(k);
    std::vector<Point> permuted(k);
    for (std::size_t probe = 0; probe < kSymmetryProbes; ++probe) {
        for (auto& x : xs) {
            x = measure.sample(rng);
        }
        const double value = h(xs);
        if (value != 0.0 && value != 1.0) {
            throw DomainError("selection function must be {0,1}-valued");
        }
        std::vector<std::size_t> order(k);
        std::iota(order.begin(), order.end(), 0);
        auto differs = [&] {
            for (std::size_t i = 0; i < k; ++i) {
                permuted[i] = xs[order[i]];
            }
            return h(permuted) != value;
        };
        if (k <= 5) {
            while (std::next_permutation(order.begin(), order.end())) {
                if (differs()) {
                    throw DomainError("selection function is not symmetric");
                }
            }
        } else {
            for (std::size_t i = 1; i < k; ++i) {
                std::iota(order.begin(), order.end(), 0);
                std::swap(order[0], order[i]);
                if (differs()) {
                    throw DomainError("selection function is not symmetric");
                }
            }
        }
    }
}

} // namespace

SteinBound ustat_gamma(std::size_t k, const Selection& h, double s, const ProbabilityMeasure& measure,
                       const IntegrationOptions& options)
{
    check_intensity(s);
    if (k < 2) {
        throw DomainError("ustat_gamma needs k >= 2");
    }
    check_selection(k, h, measure, options);
    const std::size_t inner = options.inner > 0 ? options.inner : kDefaultGammaInner;
    const double kfact = factorial(k);

    SteinBound b;
    b.k = k;
    b.method = EstimateMethod::MonteCarlo;
    double gamma_var = 0.0;
    for (std::size_t l = 1; l < k; ++l) {
        const double coef = kfact / (factorial(l) * factorial(k - l) * factorial(k - l)) *
                            std::pow(s, static_cast<double>(2 * k - l));
        const auto m = monte_carlo_means<2>(
            options.outer, formula_key(options, kGammaFormula, l), options.execution,
            [&](RandomState& rng) {
                std::vector<Point> pts(k);
                for (std::size_t i = 0; i < l; ++i) {
                    pts[i] = measure.sample(rng);
                }
                auto replica = [&] {
                    double acc = 0.0;
                    for (std::size_t r = 0; r < inner; ++r) {
                        for (std::size_t i = l; i < k; ++i) {
                            pts[i] = measure.sample(rng);
                        }
                        acc += h(pts);
                    }
                    return acc / static_cast<double>(inner);
                };
                const double a = replica();
                const double c = replica();
                return std::array<double, 2>{a * c, 0.5 * (a + c)};
            });
        b.gamma += coef * m[0].mean;
        gamma_var += coef * coef * m[0].std_error * m[0].std_error;
        if (l == 1) {
            const double scale = falling_power_ratio(s, k);
            b.alpha = scale * m[1].mean;
            b.alpha_std_error = scale * m[1].std_error;
        }
    }
    b.gamma_std_error = std::sqrt(gamma_var);
    finish_bound(b, b.gamma / kfact, b.gamma_std_error / kfact);
    return b;
}

std::pair<double, double> default_bracket(const ConnectionFunction& phi, const ProbabilityMeasure& measure)
{
    constexpr double kTiny = 1e-12;
    switch (phi.family()) {
    case Family::Constant: return {0.0, 1.0};
    case Family::HardDisk:
    case Family::SoftDisk:
    case Family::Profile:
        switch (measure.space()) {
        case SpaceKind::Torus: return {kTiny, 0.5 * (1.0 - kTiny)};
        case SpaceKind::UnitCube: return {kTiny, measure.diameter()};
        case SpaceKind::Euclidean: return {kTiny, 1e3};
        }
        break;
    case Family::KernelCapped: return {0.0, 1e6};
    case Family::Partition: break;
    }
    throw CalibrationError("the " + to_string(phi.family()) + " family has no calibration knob");
}

CalibrationResult calibrate_parameter(const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                                      const CalibrationRequest& request)
{
    if (!phi.has_knob()) {
        throw CalibrationError("the " + to_string(phi.family()) + " family has no calibration knob");
    }
    if (!(request.target_alpha > 0.0)) {
        throw CalibrationError("target alpha must be positive");
    }
    if (!(request.tolerance > 0.0)) {
        throw CalibrationError("calibration tolerance must be positive");
    }
    check_intensity(request.s);
    auto [lo, hi] = request.bracket.value_or(default_bracket(phi, measure));
    if (!(lo < hi)) {
        throw CalibrationError("calibration bracket must satisfy lo < hi");
    }

    CalibrationResult result{phi, 0.0, 0.0, 0, EstimateMethod::ClosedForm};
    auto evaluate = [&](double knob) {
        const ConnectionFunction candidate = phi.with_knob(knob);
        const auto e = expected_statistic(request.s, candidate, measure, request.statistic,
                                          request.integration);
        if (e.method == EstimateMethod::MonteCarlo) {
            result.method = EstimateMethod::MonteCarlo;
        }
        return e.value - request.target_alpha;
    };
    auto accept = [&](double knob, double diff) {
        result.phi = phi.with_knob(knob);
        result.knob = knob;
        result.achieved = diff + request.target_alpha;
        return result;
    };

    double f_lo = evaluate(lo);
    if (std::fabs(f_lo) <= request.tolerance) {
        return accept(lo, f_lo);
    }
    double f_hi = evaluate(hi);
    if (std::fabs(f_hi) <= request.tolerance) {
        return accept(hi, f_hi);
    }
    if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw CalibrationError("calibration interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                               "] does not bracket target " + std::to_string(request.target_alpha) +
                               " for " + to_string(request.statistic) + " (values " +
                               std::to_string(f_lo + request.target_alpha) + " and " +
                               std::to_string(f_hi + request.target_alpha) + ")");
    }
    for (std::size_t it = 1; it <= 400; ++it) {
        const double mid = 0.5 * (lo + hi);
        result.iterations = it;
        if (mid <= lo || mid >= hi) {
            break;
        }
        const double f_mid = evaluate(mid);
        if (std::fabs(f_mid) <= request.tolerance) {
            return accept(mid, f_mid);
        }
        if ((f_mid < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    throw CalibrationError("calibration did not reach tolerance " + std::to_string(request.tolerance) +
                           " for " + to_string(request.statistic) + "; the expectation is not resolved finely "
                           "enough at this tolerance");
}

RatioCheck degree_ratio_check(double s, const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                              std::size_t i, std::optional<double> epsilon,
                              const IntegrationOptions& options)
{
    check_intensity(s);
    if (i < 1) {
        throw DomainError("degree_ratio_check needs i >= 1");
    }
    RatioCheck check;
    if (auto levels = phi.mean_field_levels(measure)) {
        double lo_g = levels->front().value;
        double hi_g = lo_g;
        for (const auto& level : *levels) {
            if (level.mass > 0.0) {
                lo_g = std::min(lo_g, level.value);
                hi_g = std::max(hi_g, level.value);
            }
        }
        check.a_s = hi_g;
        check.epsilon = epsilon.value_or(hi_g > 0.0 ? lo_g / hi_g : 1.0);
    } else {
        const auto report = homogeneity(phi, measure, 64, inner_samples(options, s, phi), options.seed);
        check.a_s = report.sup_g;
        check.epsilon = epsilon.value_or(report.epsilon_hat);
    }
    const auto num = expected_degree_count(s, phi, measure, i, options);
    const auto den = expected_degree_count(s, phi, measure, i - 1, options);
    if (!(den.value > 0.0)) {
        throw DomainError("degree_ratio_check needs E D_{i-1} > 0");
    }
    check.ratio = num.value / den.value;
    if (num.value > 0.0) {
        const double rel_num = num.std_error / num.value;
        const double rel_den = den.std_error / den.value;
        check.std_error = check.ratio * std::sqrt(rel_num * rel_num + rel_den * rel_den);
    }
    const double di = static_cast<double>(i);
    check.upper = s * check.a_s / di;
    check.lower = check.epsilon * check.upper;
    const double slack = 1e-9 * std::max(1.0, check.upper) + 3.0 * check.std_error;
    check.pass = check.ratio >= check.lower - slack && check.ratio <= check.upper + slack;
    return check;
}

} // namespace irg
