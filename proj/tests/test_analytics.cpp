#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "irg/analytics.hpp"
#include "irg/error.hpp"
#include "irg/graph_stats.hpp"
#include "irg/marked_sampler.hpp"

using namespace irg;

namespace {

struct SimMean {
    double mean = 0.0;
    double std_error = 0.0;
};

// Mean of a statistic over independent simulated graphs.
SimMean simulate_mean(double s, const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                      const StatisticId& id, std::size_t reps, std::uint64_t seed)
{
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < reps; ++i) {
        const auto mc = sample_poisson_configuration(measure, s, derive_key(seed, i));
        const Graph g = build_graph_ordered(mc, phi);
        double v = 0.0;
        switch (id.kind) {
        case StatisticKind::Degree: v = static_cast<double>(degree_counts(g).count(id.index)); break;
        case StatisticKind::Component: v = static_cast<double>(component_counts(g).count(id.index)); break;
        case StatisticKind::ConnectedInduced: v = static_cast<double>(connected_induced_count(g, id.index)); break;
        }
        sum += v;
        sum_sq += v * v;
    }
    const double n = static_cast<double>(reps);
    const double mean = sum / n;
    return {mean, std::sqrt(std::max(0.0, sum_sq / n - mean * mean) / (n - 1.0))};
}

void check_mecke(double s, const ConnectionFunction& phi, const ProbabilityMeasure& measure, const char* stat,
                 const IntegrationOptions& options, std::uint64_t seed)
{
    const auto id = parse_statistic(stat);
    const auto analytic = expected_statistic(s, phi, measure, id, options);
    const auto sim = simulate_mean(s, phi, measure, id, 20000, seed);
    const double se = std::hypot(analytic.std_error, sim.std_error);
    CAPTURE(phi.describe());
    CAPTURE(stat);
    CAPTURE(analytic.value);
    CAPTURE(sim.mean);
    CAPTURE(se);
    CHECK(std::abs(analytic.value - sim.mean) <= 3.0 * se + 1e-12);
}

IntegrationOptions quick(std::size_t outer = 2000, std::size_t inner = 0)
{
    IntegrationOptions o;
    o.outer = outer;
    o.inner = inner;
    return o;
}

} // namespace

TEST_CASE("closed-form expectations")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto d0 = expected_degree_count(100.0, ConnectionFunction::constant(0.05), torus, 0);
    CHECK(d0.method == EstimateMethod::ClosedForm);
    CHECK(d0.std_error == 0.0);
    CHECK(d0.value == doctest::Approx(100.0 * std::exp(-5.0)).epsilon(1e-14));
    CHECK(expected_degree_count(7.0, ConnectionFunction::constant(0.0), torus, 0).value == 7.0);

    const double r = std::sqrt(std::log(1000.0) / 1000.0 / std::numbers::pi);
    CHECK(expected_degree_count(1000.0, ConnectionFunction::hard_disk(r), torus, 0).value ==
          doctest::Approx(1.0).epsilon(1e-12));

    const auto c = ConnectionFunction::constant(0.01);
    CHECK(expected_k_components(10.0, c, torus, 1).value == expected_degree_count(10.0, c, torus, 0).value);
    CHECK(expected_k_components(10.0, ConnectionFunction::constant(0.0), torus, 2).value == 0.0);

    CHECK(expected_edges(100.0, ConnectionFunction::constant(2e-4), torus).value == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(expected_edges(100.0, ConnectionFunction::constant(0.0), torus).value == 0.0);
    CHECK(expected_edges(100.0, ConnectionFunction::hard_disk(0.05), torus).value ==
          doctest::Approx(5000.0 * std::numbers::pi * 0.0025).epsilon(1e-14));
    CHECK(expected_connected_k(100.0, ConnectionFunction::hard_disk(0.05), torus, 2).value ==
          expected_edges(100.0, ConnectionFunction::hard_disk(0.05), torus).value);
    CHECK(expected_connected_k(2.0, ConnectionFunction::constant(1.0), torus, 3).value ==
          doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK_THROWS_AS(expected_degree_count(0.0, c, torus, 0), DomainError);
}

TEST_CASE("component expectations against simulation")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const double s = 10.0;
    const double p = 0.01;
    const auto analytic = expected_k_components(s, ConnectionFunction::constant(p), torus, 2);
    CHECK(analytic.method == EstimateMethod::ClosedForm);
    CHECK(analytic.value == doctest::Approx(s * s / 2.0 * p * std::exp(-s * (1.0 - (1.0 - p) * (1.0 - p)))).epsilon(1e-14));
    const auto sim = simulate_mean(s, ConnectionFunction::constant(p), torus, parse_statistic("N2"), 100000, 1);
    CHECK(std::abs(sim.mean - analytic.value) <= 3.0 * sim.std_error);
}

TEST_CASE("connected triples against simulation")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const double s = 50.0;
    const double p = 1e-3;
    const auto analytic = expected_connected_k(s, ConnectionFunction::constant(p), torus, 3);
    CHECK(analytic.value == doctest::Approx(s * s * s / 6.0 * (3 * p * p - 2 * p * p * p)).epsilon(1e-12));
    const auto sim = simulate_mean(s, ConnectionFunction::constant(p), torus, parse_statistic("H3"), 100000, 2);
    CHECK(std::abs(sim.mean - analytic.value) <= 3.0 * sim.std_error);
}

TEST_CASE("Mecke consistency across families")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    const auto gauss = ProbabilityMeasure::gaussian(1);
    const double s = 30.0;
    check_mecke(s, ConnectionFunction::constant(0.05), torus, "D1", quick(), 10);
    check_mecke(s, ConnectionFunction::hard_disk(0.12).bind(cube), cube, "D0", quick(), 11);
    check_mecke(s, ConnectionFunction::hard_disk(0.12).bind(cube), cube, "D2", quick(), 12);
    check_mecke(s, ConnectionFunction::soft_disk(0.5, 0.15).bind(torus), torus, "D0", quick(), 13);
    check_mecke(s, ConnectionFunction::soft_disk(0.5, 0.15).bind(torus), torus, "H2", quick(), 14);
    check_mecke(s, ConnectionFunction::profile(ProfileShape::Rayleigh, 0.6, 0.1).bind(torus), torus, "D0",
                quick(2000, 20000), 15);
    check_mecke(s, ConnectionFunction::profile(ProfileShape::Exponential, 0.2, 0.1).bind(torus), torus, "H2",
                quick(200000), 16);
    check_mecke(s, ConnectionFunction::kernel_capped(0.2, KernelShape::Gaussian, 0.5), gauss, "D0",
                quick(2000, 20000), 17);
    check_mecke(s, ConnectionFunction::partition(s), line, "D0", quick(), 18);
    check_mecke(s, ConnectionFunction::partition(s), line, "N2", quick(20000), 19);
    check_mecke(s, ConnectionFunction::hard_disk(0.03).bind(line), line, "N2", quick(20000), 20);
    check_mecke(s, ConnectionFunction::hard_disk(0.05).bind(torus), torus, "N2", quick(20000, 2000), 21);
    check_mecke(s, ConnectionFunction::hard_disk(0.1).bind(line), line, "H3", quick(100000), 22);
}

TEST_CASE("Monte Carlo estimates do not depend on the execution path")
{
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const auto phi = ConnectionFunction::hard_disk(0.1).bind(cube);
    auto serial = quick(5000, 500);
    serial.execution = Execution::Serial;
    auto parallel = serial;
    parallel.execution = Execution::Parallel;
    const auto a = expected_degree_count(50.0, phi, cube, 1, serial);
    const auto b = expected_degree_count(50.0, phi, cube, 1, parallel);
    CHECK(a.method == EstimateMethod::MonteCarlo);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    const auto c = expected_degree_count(50.0, phi, cube, 1, parallel);
    CHECK(b.value == c.value);
}

TEST_CASE("default inner sample rule")
{
    CHECK(default_inner_samples(1.0, ConnectionFunction::constant(0.5)) == 1000);
    CHECK(default_inner_samples(100.0, ConnectionFunction::constant(0.1)) == 10000);
    CHECK(default_inner_samples(1e4, ConnectionFunction::hard_disk(0.1)) == kMaxInnerSamples);
}

TEST_CASE("edge Stein bound")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto b = edge_stein_bound(100.0, ConnectionFunction::constant(2e-4), torus);
    CHECK(b.alpha == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(b.tv_bound == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(b.w_bound == doctest::Approx(3.0 * 0.04).epsilon(1e-12));
    CHECK(b.method == EstimateMethod::ClosedForm);
    CHECK(edge_stein_bound(100.0, ConnectionFunction::constant(0.0), torus).tv_bound == 0.0);

    const double s = 100.0;
    const double r = std::sqrt(2.0 / (s * s) / std::numbers::pi);
    const auto disk = edge_stein_bound(s, ConnectionFunction::hard_disk(r), torus);
    const double g = 2.0 / (s * s);
    const double alpha = s * s / 2.0 * g;
    CHECK(disk.alpha == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(disk.tv_bound == doctest::Approx(s * s * s * g * g * std::min(1.0, 1.0 / alpha)).epsilon(1e-12));

    // Larger alpha: the Stein factors differ.
    const auto big = edge_stein_bound(100.0, ConnectionFunction::constant(0.01), torus);
    CHECK(big.alpha == doctest::Approx(50.0));
    CHECK(big.w_bound == doctest::Approx(3.0 / std::sqrt(50.0) / (1.0 / 50.0) * big.tv_bound));
}

TEST_CASE("edge Stein bound by Monte Carlo")
{
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    // Hard disk on the unit interval: g(x) = min(1, x + r) - max(0, x - r).
    const double r = 0.1;
    const double s = 20.0;
    auto opts = quick(200000, 0);
    const auto b = edge_stein_bound(s, ConnectionFunction::hard_disk(r), cube, opts);
    // int g^2 dx by quadrature.
    double integral = 0.0;
    double mass = 0.0;
    const int steps = 200000;
    for (int i = 0; i < steps; ++i) {
        const double x = (i + 0.5) / steps;
        const double g = std::min(1.0, x + r) - std::max(0.0, x - r);
        integral += g * g / steps;
        mass += g / steps;
    }
    const double alpha = s * s / 2.0 * mass;
    CHECK(b.alpha == doctest::Approx(alpha).epsilon(1e-3));
    CHECK(std::abs(b.tv_bound - s * s * s * integral / alpha) <= 4.0 * b.std_error + 1e-12);
}

TEST_CASE("U-statistic gamma closed forms")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const Selection one = [](std::span<const Point>) { return 1.0; };
    const Selection zero = [](std::span<const Point>) { return 0.0; };
    auto opts = quick(2000, 100);
    const auto g1 = ustat_gamma(2, one, 10.0, torus, opts);
    CHECK(g1.gamma == doctest::Approx(2000.0));
    CHECK(g1.alpha == doctest::Approx(50.0));
    CHECK(g1.tv_bound == doctest::Approx(2000.0 / 50.0 / 2.0));
    const auto g3 = ustat_gamma(3, one, 10.0, torus, opts);
    CHECK(g3.gamma == doctest::Approx(1.5e5 + 3e4));
    const auto g0 = ustat_gamma(2, zero, 10.0, torus, opts);
    CHECK(g0.gamma == 0.0);
    CHECK(g0.alpha == 0.0);
    CHECK(g0.tv_bound == 0.0);

    const Selection asym = [](std::span<const Point> xs) { return xs[0][0] < xs[1][0] ? 1.0 : 0.0; };
    CHECK_THROWS_AS(ustat_gamma(2, asym, 10.0, torus, opts), DomainError);
    const Selection fractional = [](std::span<const Point>) { return 0.5; };
    CHECK_THROWS_AS(ustat_gamma(2, fractional, 10.0, torus, opts), DomainError);
    CHECK_THROWS_AS(indicator_selection(ConnectionFunction::constant(0.5), 2), DomainError);
}

TEST_CASE("two-replica estimator removes the squaring bias")
{
    // gamma = 2 s^3 g^2 exactly for a hard disk on the torus. A tiny inner
    // sample would bias a plug-in square by Var / inner.
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const double r = 0.2;
    const double s = 10.0;
    const double g = std::numbers::pi * r * r;
    auto opts = quick(200000, 4);
    const auto b = ustat_gamma(2, indicator_selection(ConnectionFunction::hard_disk(r).bind(torus), 2), s, torus, opts);
    CHECK(std::abs(b.gamma - 2.0 * s * s * s * g * g) <= 4.0 * b.gamma_std_error);
    const double plugin_bias = 2.0 * s * s * s * g * (1.0 - g) / 4.0;
    CHECK(plugin_bias > 10.0 * b.gamma_std_error);
}

TEST_CASE("U-statistic bound agrees with the edge bound for k = 2")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const double s = 100.0;
    const double r = std::sqrt(2.0 / (s * s) / std::numbers::pi);
    const auto phi = ConnectionFunction::hard_disk(r).bind(torus);
    const auto edge = edge_stein_bound(s, phi, torus);
    const auto u = ustat_gamma(2, indicator_selection(phi, 2), s, torus, quick(4000, 20000));
    CHECK(std::abs(u.tv_bound - edge.tv_bound) <= 2.0 * std::hypot(u.std_error, edge.std_error) + 1e-12);
    CHECK(std::abs(u.alpha - edge.alpha) <= 3.0 * u.alpha_std_error + 1e-12);
}

TEST_CASE("calibration")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    CalibrationRequest req;
    req.s = 1000.0;
    req.target_alpha = 1.0;
    req.statistic = parse_statistic("D0");
    const auto disk = calibrate_parameter(ConnectionFunction::hard_disk(0.1).bind(torus), torus, req);
    const double r = std::sqrt(std::log(1000.0) / 1000.0 / std::numbers::pi);
    CHECK(disk.knob == doctest::Approx(r).epsilon(1e-8));
    CHECK(std::abs(disk.achieved - 1.0) <= 1e-9);
    CHECK(disk.method == EstimateMethod::ClosedForm);

    req.s = 100.0;
    const auto c = calibrate_parameter(ConnectionFunction::constant(0.5), torus, req);
    CHECK(c.knob == doctest::Approx(std::log(100.0) / 100.0).epsilon(1e-8));

    // Idempotence: the returned knob reproduces the target.
    const auto again = expected_degree_count(100.0, c.phi, torus, 0);
    CHECK(std::abs(again.value - 1.0) <= req.tolerance);

    req.target_alpha = 150.0;
    CHECK_THROWS_AS(calibrate_parameter(ConnectionFunction::constant(0.5), torus, req), CalibrationError);
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    req.target_alpha = 1.0;
    CHECK_THROWS_AS(calibrate_parameter(ConnectionFunction::partition(100.0), line, req), CalibrationError);
}

TEST_CASE("calibration by Monte Carlo is deterministic")
{
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    CalibrationRequest req;
    req.s = 50.0;
    req.target_alpha = 2.0;
    req.statistic = parse_statistic("D0");
    req.tolerance = 1e-6;
    req.integration = quick(2000, 500);
    // A smooth kernel keeps the fixed-seed estimate continuous in the knob.
    const auto phi = ConnectionFunction::profile(ProfileShape::Rayleigh, 0.8, 0.1).bind(cube);
    const auto a = calibrate_parameter(phi, cube, req);
    const auto b = calibrate_parameter(phi, cube, req);
    CHECK(a.method == EstimateMethod::MonteCarlo);
    CHECK(a.knob == b.knob);
    CHECK(std::abs(a.achieved - 2.0) <= 1e-6);
}

TEST_CASE("degree ratio bounds")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto c = degree_ratio_check(100.0, ConnectionFunction::constant(0.03), torus, 2);
    CHECK(c.ratio == doctest::Approx(100.0 * 0.03 / 2.0).epsilon(1e-12));
    CHECK(c.lower == doctest::Approx(c.upper).epsilon(1e-12));
    CHECK(c.pass);
    const auto d = degree_ratio_check(100.0, ConnectionFunction::hard_disk(0.05).bind(torus), torus, 1);
    CHECK(d.ratio == doctest::Approx(100.0 * std::numbers::pi * 0.0025).epsilon(1e-12));
    CHECK(d.epsilon == doctest::Approx(1.0));
    CHECK(d.pass);
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    for (std::size_t i = 1; i <= 4; ++i) {
        const auto p = degree_ratio_check(20.0, ConnectionFunction::partition(20.0), line, i);
        CHECK(p.epsilon == doctest::Approx(0.05 / 0.95));
        CHECK(p.ratio >= p.lower);
        CHECK(p.ratio <= p.upper);
        CHECK(p.pass);
    }
}
