#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "irg/error.hpp"
#include "irg/statespace.hpp"

using namespace irg;

namespace {

// Trapezoid rule on [lo, hi].
template <class F>
double integrate(F&& f, double lo, double hi, int steps = 20000)
{
    const double h = (hi - lo) / steps;
    double sum = 0.5 * (f(lo) + f(hi));
    for (int i = 1; i < steps; ++i) {
        sum += f(lo + i * h);
    }
    return sum * h;
}

} // namespace

TEST_CASE("unit ball volumes")
{
    CHECK(unit_ball_volume(1) == doctest::Approx(2.0));
    CHECK(unit_ball_volume(2) == doctest::Approx(std::numbers::pi));
    CHECK(unit_ball_volume(3) == doctest::Approx(4.0 * std::numbers::pi / 3.0));
}

TEST_CASE("uniform samples stay in the unit box")
{
    for (auto kind : {SpaceKind::UnitCube, SpaceKind::Torus}) {
        const auto m = ProbabilityMeasure::uniform(kind, 3);
        RandomState rng(1);
        for (int i = 0; i < 10000; ++i) {
            const Point p = m.sample(rng);
            REQUIRE(p.dimension() == 3);
            for (int c = 0; c < 3; ++c) {
                REQUIRE(p[c] >= 0.0);
                REQUIRE(p[c] < 1.0);
            }
        }
        CHECK(m.density(Point{0.3, 0.9, 0.1}) == 1.0);
    }
}

TEST_CASE("sampling is a function of the seed")
{
    const auto m = ProbabilityMeasure::gaussian(2);
    RandomState a(42);
    RandomState b(42);
    for (int i = 0; i < 100; ++i) {
        CHECK(m.sample(a) == m.sample(b));
    }
}

TEST_CASE("gaussian moments and density")
{
    const auto m = ProbabilityMeasure::gaussian(1);
    RandomState rng(2);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += m.sample(rng)[0];
    }
    CHECK(std::abs(sum / n) < 4.0 / std::sqrt(n));
    CHECK(integrate([&](double x) { return m.density(Point{x}); }, -9.0, 9.0) == doctest::Approx(1.0).epsilon(1e-9));
    const auto m2 = ProbabilityMeasure::gaussian(2);
    CHECK(m2.density(Point{0.0, 0.0}) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("weibull(1,1) is exponential(1)")
{
    const auto m = ProbabilityMeasure::weibull(1, 1.0, 1.0);
    RandomState rng(3);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += m.sample(rng)[0];
    }
    CHECK(std::abs(sum / n - 1.0) < 4.0 / std::sqrt(n));
    CHECK(m.density(Point{0.5}) == doctest::Approx(std::exp(-0.5)));
    CHECK_THROWS_AS(m.density(Point{-0.5}), DomainError);
}

TEST_CASE("weibull mean matches the gamma-function formula")
{
    const double shape = 2.5;
    const double scale = 0.7;
    const auto m = ProbabilityMeasure::weibull(2, shape, scale);
    RandomState rng(4);
    const int n = 400000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = m.sample(rng)[1];
        sum += x;
        sum_sq += x * x;
    }
    const double mean = scale * std::tgamma(1.0 + 1.0 / shape);
    const double var = scale * scale * std::tgamma(1.0 + 2.0 / shape) - mean * mean;
    CHECK(std::abs(sum / n - mean) < 4.0 * std::sqrt(var / n));
    const auto m1 = ProbabilityMeasure::weibull(1, shape, scale);
    CHECK(integrate([&](double x) { return m1.density(Point{x}); }, 0.0, 10.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("tabulated density")
{
    // Mass 0.2 on the left half, 1.8 on the right half.
    const auto m = ProbabilityMeasure::tabulated(SpaceKind::UnitCube, 1, 2, {0.2, 1.8});
    CHECK(m.density(Point{0.25}) == doctest::Approx(0.2));
    CHECK(m.density(Point{0.75}) == doctest::Approx(1.8));
    RandomState rng(5);
    const int n = 100000;
    int left = 0;
    for (int i = 0; i < n; ++i) {
        const double x = m.sample(rng)[0];
        REQUIRE(x >= 0.0);
        REQUIRE(x < 1.0);
        left += x < 0.5 ? 1 : 0;
    }
    CHECK(std::abs(left / static_cast<double>(n) - 0.1) < 4.0 * std::sqrt(0.09 / n));

    const auto m2 = ProbabilityMeasure::tabulated(SpaceKind::Torus, 2, 2, {4.0, 0.0, 0.0, 0.0});
    RandomState rng2(6);
    for (int i = 0; i < 1000; ++i) {
        const Point p = m2.sample(rng2);
        REQUIRE(p[0] < 0.5);
        REQUIRE(p[1] < 0.5);
    }
    CHECK_THROWS_AS(ProbabilityMeasure::tabulated(SpaceKind::UnitCube, 1, 2, {0.5, 0.5}), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::tabulated(SpaceKind::UnitCube, 1, 2, {1.0}), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::tabulated(SpaceKind::UnitCube, 1, 2, {-1.0, 3.0}), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::tabulated(SpaceKind::Euclidean, 1, 1, {1.0}), ConfigError);
    CHECK_THROWS_AS(m.density(Point{1.5}), DomainError);
}

TEST_CASE("configuration errors")
{
    CHECK_THROWS_AS(ProbabilityMeasure::uniform(SpaceKind::UnitCube, 0), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::uniform(SpaceKind::Euclidean, 2), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::weibull(1, 0.0, 1.0), ConfigError);
    CHECK_THROWS_AS(ProbabilityMeasure::gaussian(kMaxDimension + 1), ConfigError);
}

TEST_CASE("metrics")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const Point a{0.05, 0.5};
    const Point b{0.95, 0.5};
    CHECK(torus.distance(a, b) == doctest::Approx(0.1));
    CHECK(cube.distance(a, b) == doctest::Approx(0.9));
    CHECK(torus.distance(Point{0.1, 0.1}, Point{0.9, 0.9}) == doctest::Approx(std::sqrt(0.08)));
    CHECK(torus.diameter() == doctest::Approx(std::sqrt(0.5)));
    CHECK(cube.diameter() == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::isinf(ProbabilityMeasure::gaussian(2).diameter()));
    CHECK_THROWS_AS(cube.density(Point{1.2, 0.5}), DomainError);
}

TEST_CASE("ball measure closed forms")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto e = ball_measure(torus, Point{0.99, 0.01}, 0.05);
    CHECK(e.exact);
    CHECK(e.value == doctest::Approx(std::numbers::pi * 0.0025).epsilon(1e-14));
    CHECK(ball_measure(torus, Point{0.5, 0.5}, 0.0).value == 0.0);
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    CHECK(ball_measure(line, Point{0.5}, 0.25).value == doctest::Approx(0.5));
    CHECK(ball_measure(line, Point{0.1}, 0.25).value == doctest::Approx(0.35));
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    CHECK(ball_measure(cube, Point{0.5, 0.5}, 2.0).value == 1.0);
    CHECK_THROWS_AS(ball_measure(cube, Point{0.5, 0.5}, -1.0), DomainError);
}

TEST_CASE("ball measure Monte Carlo on the cube")
{
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const double area = std::numbers::pi * 0.01;
    const auto centre = ball_measure(cube, Point{0.5, 0.5}, 0.1);
    CHECK_FALSE(centre.exact);
    CHECK(std::abs(centre.value - area) < 4.0 * centre.std_error);
    const auto corner = ball_measure(cube, Point{0.0, 0.0}, 0.1);
    CHECK(std::abs(corner.value - area / 4.0) < 4.0 * corner.std_error);
    // Common random numbers make the estimate monotone in the radius.
    double last = 0.0;
    for (double r = 0.01; r < 0.6; r += 0.01) {
        const double v = ball_measure(cube, Point{0.3, 0.6}, r).value;
        CHECK(v >= last);
        last = v;
    }
    const auto gauss = ProbabilityMeasure::gaussian(1);
    const auto g = ball_measure(gauss, Point{0.0}, 1.0);
    CHECK(std::abs(g.value - std::erf(1.0 / std::sqrt(2.0))) < 4.0 * g.std_error);
}
