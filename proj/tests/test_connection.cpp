#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "irg/connection.hpp"
#include "irg/error.hpp"
#include "oracles.hpp"

using namespace irg;

namespace {

std::vector<ConnectionFunction> every_family()
{
    return {
        ConnectionFunction::constant(0.3),
        ConnectionFunction::hard_disk(0.1),
        ConnectionFunction::soft_disk(0.6, 0.2),
        ConnectionFunction::profile(ProfileShape::Rayleigh, 0.8, 0.15),
        ConnectionFunction::profile(ProfileShape::Exponential, 0.5, 0.1),
        ConnectionFunction::kernel_capped(0.4, KernelShape::Gaussian, 0.9),
        ConnectionFunction::kernel_capped(0.1, KernelShape::Product, 0.7),
        ConnectionFunction::partition(10.0),
    };
}

PairProbabilities random_probs(std::size_t k, RandomState& rng)
{
    PairProbabilities probs(k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            const double u = rng.uniform();
            // Mix in exact zeros and ones.
            probs.set(i, j, u < 0.1 ? 0.0 : (u > 0.9 ? 1.0 : rng.uniform()));
        }
    }
    return probs;
}

} // namespace

TEST_CASE("family values")
{
    const Point x{0.2, 0.2};
    const Point y{0.25, 0.2};
    const Point z{0.4, 0.2};
    CHECK(ConnectionFunction::constant(0.3)(x, z) == 0.3);
    const auto disk = ConnectionFunction::hard_disk(0.1).with_metric(SpaceKind::Torus);
    CHECK(disk(x, y) == 1.0);
    CHECK(disk(x, z) == 0.0);
    CHECK(disk(Point{0.98, 0.5}, Point{0.03, 0.5}) == 1.0);
    CHECK(ConnectionFunction::hard_disk(0.1)(Point{0.98, 0.5}, Point{0.03, 0.5}) == 0.0);
    CHECK(ConnectionFunction::soft_disk(0.5, 0.1)(x, y) == 0.5);
    CHECK(ConnectionFunction::profile(ProfileShape::Rayleigh, 0.8, 0.1)(x, z) ==
          doctest::Approx(0.8 * std::exp(-4.0)));
    CHECK(ConnectionFunction::profile(ProfileShape::Exponential, 0.8, 0.1)(x, z) ==
          doctest::Approx(0.8 * std::exp(-2.0)));
    CHECK(ConnectionFunction::kernel_capped(2.0, KernelShape::Gaussian, 0.9)(x, y) == 0.9);
    CHECK(ConnectionFunction::kernel_capped(0.5, KernelShape::Gaussian, 0.9)(x, z) ==
          doctest::Approx(0.5 * std::exp(-0.04)));
    const auto part = ConnectionFunction::partition(10.0);
    CHECK(part(Point{0.05}, Point{0.5}) == 0.0);
    CHECK(part(Point{0.05}, Point{0.1}) == 1.0);
    CHECK(part(Point{0.5}, Point{0.9}) == 1.0);
}

TEST_CASE("configuration errors")
{
    CHECK_THROWS_AS(ConnectionFunction::constant(1.5), ConfigError);
    CHECK_THROWS_AS(ConnectionFunction::hard_disk(-0.1), ConfigError);
    CHECK_THROWS_AS(ConnectionFunction::kernel_capped(1.0, KernelShape::Gaussian, 1.2), ConfigError);
    CHECK_THROWS_AS(ConnectionFunction::partition(0.0), ConfigError);
    CHECK_THROWS_AS(ConnectionFunction::partition(5.0).knob(), CalibrationError);
}

TEST_CASE("symmetry and range over random pairs")
{
    RandomState rng(1);
    for (const auto& f : every_family()) {
        for (auto metric : {SpaceKind::UnitCube, SpaceKind::Torus}) {
            const auto phi = f.with_metric(metric);
            for (int i = 0; i < 10000; ++i) {
                const Point x{rng.uniform(), rng.uniform()};
                const Point y{rng.uniform(), rng.uniform()};
                const double a = phi(x, y);
                REQUIRE(a == phi(y, x));
                REQUIRE(a >= 0.0);
                REQUIRE(a <= phi.sup_phi());
            }
        }
    }
}

TEST_CASE("knob round trip")
{
    for (const auto& f : every_family()) {
        if (!f.has_knob()) {
            continue;
        }
        const auto g = f.with_knob(f.knob() * 0.5).with_knob(f.knob());
        CHECK(g.describe() == f.describe());
    }
}

TEST_CASE("exact mean fields")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const Point x{0.3, 0.7};
    CHECK(*ConnectionFunction::constant(0.05).exact_mean_field(torus, x) == 0.05);
    CHECK(*ConnectionFunction::hard_disk(0.05).exact_mean_field(torus, x) ==
          doctest::Approx(std::numbers::pi * 0.0025).epsilon(1e-14));
    CHECK(*ConnectionFunction::soft_disk(0.5, 0.05).exact_mean_field(torus, x) ==
          doctest::Approx(0.5 * std::numbers::pi * 0.0025).epsilon(1e-14));
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    CHECK(*ConnectionFunction::hard_disk(0.2).exact_mean_field(line, Point{0.1}) == doctest::Approx(0.3));
    CHECK(*ConnectionFunction::partition(10.0).exact_mean_field(line, Point{0.05}) == doctest::Approx(0.1));
    CHECK(*ConnectionFunction::partition(10.0).exact_mean_field(line, Point{0.5}) == doctest::Approx(0.9));
    CHECK_FALSE(ConnectionFunction::profile(ProfileShape::Rayleigh, 0.5, 0.1).exact_mean_field(torus, x));
}

TEST_CASE("mean_field agrees with an independent Monte Carlo average")
{
    const auto cube = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 2);
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const Point x{0.1, 0.45};
    struct Case {
        ConnectionFunction phi;
        const ProbabilityMeasure* measure;
    };
    const std::vector<Case> cases{
        {ConnectionFunction::hard_disk(0.2), &cube},
        {ConnectionFunction::hard_disk(0.2), &torus},
        {ConnectionFunction::profile(ProfileShape::Rayleigh, 0.7, 0.3), &torus},
        {ConnectionFunction::kernel_capped(0.9, KernelShape::Gaussian, 0.8), &cube},
    };
    for (const auto& c : cases) {
        RandomState rng(7);
        const Estimate e = mean_field(c.phi, *c.measure, x, 50000, rng);
        const auto bound = c.phi.bind(*c.measure);
        RandomState other(8);
        const int n = 200000;
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            sum += bound(x, c.measure->sample(other));
        }
        const double oracle = sum / n;
        const double se = e.exact ? std::sqrt(oracle * (1 - oracle) / n)
                                  : std::hypot(e.std_error, std::sqrt(oracle * (1 - oracle) / n));
        CAPTURE(c.phi.describe());
        CHECK(std::abs(e.value - oracle) < 4.0 * se);
    }
}

TEST_CASE("group connection probabilities")
{
    const auto half = ConnectionFunction::constant(0.5);
    const std::vector<Point> xs{Point{0.1}, Point{0.2}};
    const std::vector<Point> ys{Point{0.3}};
    CHECK(group_connect_prob(half, xs, ys) == doctest::Approx(0.75));
    CHECK(group_connect_prob(ConnectionFunction::constant(0.0), xs, ys) == 0.0);
    const auto p = 0.3;
    const auto c = ConnectionFunction::constant(p);
    CHECK(group_connect_prob(c, std::vector<Point>{Point{0.1}}, ys) == doctest::Approx(p));

    const std::vector<std::vector<Point>> two{{Point{0.1}}, {Point{0.7}}};
    const auto disk = ConnectionFunction::hard_disk(0.3);
    CHECK(no_cross_edge_prob(disk, two) == 1.0 - disk(Point{0.1}, Point{0.7}));
    const std::vector<std::vector<Point>> pairs{{Point{0.1}, Point{0.2}}, {Point{0.3}, Point{0.4}}};
    CHECK(no_cross_edge_prob(c, pairs) == doctest::Approx(std::pow(1.0 - p, 4)));
    CHECK(no_cross_edge_prob(ConnectionFunction::hard_disk(0.15), pairs) == 0.0);
    CHECK_THROWS_AS(no_cross_edge_prob(c, std::vector<std::vector<Point>>{{Point{0.1}}}), DomainError);
}

TEST_CASE("union-bound sandwich and Bonferroni inequality")
{
    const auto phi = ConnectionFunction::profile(ProfileShape::Rayleigh, 0.3, 0.2).with_metric(SpaceKind::Torus);
    const double bar = phi.sup_phi();
    RandomState rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const Point z{rng.uniform(), rng.uniform()};
        const std::size_t groups = 1 + rng.below(4);
        const std::size_t k = 1 + rng.below(3);
        std::vector<Point> all;
        double bonferroni = 0.0;
        for (std::size_t g = 0; g < groups; ++g) {
            std::vector<Point> group;
            for (std::size_t i = 0; i < k; ++i) {
                group.push_back(Point{rng.uniform(), rng.uniform()});
            }
            bonferroni += group_connect_prob(phi, std::vector<Point>{z}, group);
            all.insert(all.end(), group.begin(), group.end());
        }
        const double joint = group_connect_prob(phi, std::vector<Point>{z}, all);
        double max_pair = 0.0;
        double sum_pair = 0.0;
        for (const Point& y : all) {
            max_pair = std::max(max_pair, phi(z, y));
            sum_pair += phi(z, y);
        }
        REQUIRE(joint >= max_pair - 1e-15);
        REQUIRE(joint <= sum_pair + 1e-15);
        REQUIRE(joint >= bonferroni * (1.0 - static_cast<double>(k * groups) * bar) - 1e-15);
    }
}

TEST_CASE("factorization of the independent-edge product measure")
{
    // Three groups; the product of all 1 - phi over pairs equals the cross
    // part times the within-group parts.
    const auto phi = ConnectionFunction::soft_disk(0.7, 0.5);
    const std::vector<std::vector<Point>> groups{
        {Point{0.1}, Point{0.3}}, {Point{0.5}}, {Point{0.6}, Point{0.8}, Point{0.95}}};
    std::vector<Point> all;
    for (const auto& g : groups) {
        all.insert(all.end(), g.begin(), g.end());
    }
    double full = 1.0;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            full *= 1.0 - phi(all[i], all[j]);
        }
    }
    double within = 1.0;
    for (const auto& g : groups) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            for (std::size_t j = i + 1; j < g.size(); ++j) {
                within *= 1.0 - phi(g[i], g[j]);
            }
        }
    }
    CHECK(no_cross_edge_prob(phi, groups) * within == doctest::Approx(full).epsilon(1e-14));
}

TEST_CASE("connectedness small cases")
{
    const auto half = ConnectionFunction::constant(0.5);
    CHECK(connectedness_prob(half, std::vector<Point>{Point{0.1}}) == 1.0);
    const auto disk = ConnectionFunction::hard_disk(0.2);
    CHECK(connectedness_prob(disk, std::vector<Point>{Point{0.1}, Point{0.2}}) == 1.0);
    CHECK(connectedness_prob(disk, std::vector<Point>{Point{0.1}, Point{0.5}}) == 0.0);
    const std::vector<Point> three{Point{0.1}, Point{0.2}, Point{0.3}};
    CHECK(connectedness_prob(half, three) == doctest::Approx(0.5).epsilon(1e-15));
    const double p = 0.13;
    CHECK(connectedness_prob(ConnectionFunction::constant(p), three) ==
          doctest::Approx(3 * p * p - 2 * p * p * p).epsilon(1e-14));
    for (auto method : {ConnectednessMethod::Enumerate, ConnectednessMethod::SubsetRecursion}) {
        CHECK(connectedness_prob(half, three, {method}) == doctest::Approx(0.5).epsilon(1e-15));
    }
}

TEST_CASE("subset recursion and enumeration agree with the brute-force oracle")
{
    RandomState rng(10);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t k = 1 + trial % 5;
        const auto probs = random_probs(k, rng);
        const double oracle = oracle::connectedness_by_enumeration(probs);
        CHECK(std::abs(connectedness_prob(probs, {ConnectednessMethod::Enumerate}) - oracle) <= 1e-12);
        CHECK(std::abs(connectedness_prob(probs, {ConnectednessMethod::SubsetRecursion}) - oracle) <= 1e-12);
    }
}

TEST_CASE("subset recursion beyond the enumeration limit")
{
    // Constant p on k vertices: the classical recursion
    // C_k = 1 - sum_{j<k} binom(k-1, j-1) C_j (1-p)^{j(k-j)}.
    const double p = 0.3;
    std::vector<double> c(15, 0.0);
    c[1] = 1.0;
    for (std::size_t k = 2; k <= 14; ++k) {
        double miss = 0.0;
        double binom = 1.0; // binom(k-1, j-1)
        for (std::size_t j = 1; j < k; ++j) {
            miss += binom * c[j] * std::pow(1.0 - p, static_cast<double>(j * (k - j)));
            binom = binom * static_cast<double>(k - j) / static_cast<double>(j);
        }
        c[k] = 1.0 - miss;
    }
    for (std::size_t k : {6u, 9u, 14u}) {
        PairProbabilities probs(k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = i + 1; j < k; ++j) {
                probs.set(i, j, p);
            }
        }
        CHECK(connectedness_prob(probs) == doctest::Approx(c[k]).epsilon(1e-12));
        CHECK_THROWS_AS(connectedness_prob(probs, {ConnectednessMethod::Enumerate}), CapabilityError);
    }
    PairProbabilities big(15);
    CHECK_THROWS_AS(connectedness_prob(big), CapabilityError);
}

TEST_CASE("Monte Carlo connectedness is consistent")
{
    RandomState rng(11);
    const auto probs = random_probs(5, rng);
    const double exact = connectedness_prob(probs);
    ConnectednessOptions options{ConnectednessMethod::MonteCarlo, 200000, 3};
    const double mc = connectedness_prob(probs, options);
    CHECK(std::abs(mc - exact) < 4.0 * std::sqrt(exact * (1 - exact) / 200000) + 1e-12);
}

TEST_CASE("connectedness is monotone in each pair probability")
{
    RandomState rng(12);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 3 + trial % 4;
        auto probs = random_probs(k, rng);
        const double before = connectedness_prob(probs);
        const std::size_t i = rng.below(k);
        std::size_t j = rng.below(k - 1);
        j += j >= i ? 1 : 0;
        probs.set(i, j, std::min(1.0, probs(i, j) + 0.2 * rng.uniform()));
        REQUIRE(connectedness_prob(probs) >= before - 1e-15);
    }
}

TEST_CASE("homogeneity")
{
    const auto torus = ProbabilityMeasure::uniform(SpaceKind::Torus, 2);
    const auto c = homogeneity(ConnectionFunction::constant(0.2), torus, 16, 100);
    CHECK(c.epsilon_hat == 1.0);
    CHECK(c.exact_mean_field);
    CHECK(homogeneity(ConnectionFunction::hard_disk(0.1), torus, 16, 100).epsilon_hat ==
          doctest::Approx(1.0).epsilon(1e-14));
    const auto line = ProbabilityMeasure::uniform(SpaceKind::UnitCube, 1);
    const auto part = homogeneity(ConnectionFunction::partition(100.0), line, 64, 100);
    CHECK(part.epsilon_hat == doctest::Approx(0.01 / 0.99).epsilon(1e-12));
    CHECK(part.inf_g <= part.sup_g);
    const auto capped = homogeneity(ConnectionFunction::kernel_capped(0.5, KernelShape::Gaussian, 0.9), torus, 32, 2000);
    CHECK(capped.epsilon_hat > 0.0);
    CHECK(capped.epsilon_hat <= 1.0);
    CHECK_FALSE(capped.exact_mean_field);
    CHECK_THROWS_AS(homogeneity(ConnectionFunction::constant(0.2), torus, 1, 1), DomainError);
}
