#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>

#include "irg/connection.hpp"
#include "irg/parallel.hpp"
#include "irg/statespace.hpp"
#include "irg/statistic.hpp"

namespace irg {

struct IntegrationOptions {
    std::size_t outer = 20000;
    std::size_t inner = 0; // 0 selects default_inner_samples
    std::uint64_t seed = 0x1A7E6;
    Execution execution = Execution::Parallel;
    ConnectednessOptions connectedness{};
};

inline constexpr std::size_t kMaxInnerSamples = 200000;

// max(1e3, (s * sup phi)^2 * 1e2), capped at kMaxInnerSamples.
std::size_t default_inner_samples(double s, const ConnectionFunction& phi);

enum class EstimateMethod { ClosedForm, MonteCarlo };
std::string to_string(EstimateMethod method);

struct ExpectationEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t outer_samples = 0;
    std::size_t inner_samples = 0;
    EstimateMethod method = EstimateMethod::ClosedForm;
};

// E D_j = s * int (s g)^j / j! exp(-s g) dmu.
ExpectationEstimate expected_degree_count(double s, const ConnectionFunction& phi,
                                          const ProbabilityMeasure& measure, std::size_t j,
                                          const IntegrationOptions& options = {});

// E N_k = s^k / k! int h_phi(x) exp(-s int phi(z, {x}) mu(dz)) mu^k(dx).
ExpectationEstimate expected_k_components(double s, const ConnectionFunction& phi,
                                          const ProbabilityMeasure& measure, std::size_t k,
                                          const IntegrationOptions& options = {});

// Unordered edge count: s^2 / 2 int int phi dmu dmu.
ExpectationEstimate expected_edges(double s, const ConnectionFunction& phi,
                                   const ProbabilityMeasure& measure,
                                   const IntegrationOptions& options = {});

// E H_k = s^k / k! int h_phi dmu^k.
ExpectationEstimate expected_connected_k(double s, const ConnectionFunction& phi,
                                         const ProbabilityMeasure& measure, std::size_t k,
                                         const IntegrationOptions& options = {});

ExpectationEstimate expected_statistic(double s, const ConnectionFunction& phi,
                                       const ProbabilityMeasure& measure, const StatisticId& id,
                                       const IntegrationOptions& options = {});

struct SteinBound {
    double alpha = 0.0;
    double alpha_std_error = 0.0;
    double tv_bound = 0.0;
    double w_bound = 0.0;
    double std_error = 0.0; // of tv_bound
    std::size_t k = 2;
    double gamma = 0.0;
    double gamma_std_error = 0.0;
    EstimateMethod method = EstimateMethod::ClosedForm;
};

// tv <= (1 ^ 1/alpha) int (s g)^2 s dmu with alpha = E H_2.
SteinBound edge_stein_bound(double s, const ConnectionFunction& phi,
                            const ProbabilityMeasure& measure, const IntegrationOptions& options = {});

// Symmetric {0,1}-valued function of k points.
using Selection = std::function<double(std::span<const Point>)>;

// h(x_1..x_k) = 1 iff the points induce a connected graph under a {0,1}-valued phi.
Selection indicator_selection(const ConnectionFunction& phi, std::size_t k);

// gamma(h, s mu) with the U-statistic bounds tv <= (1 ^ 1/alpha) gamma / k! and
// w <= 3 (1 ^ alpha^{-1/2}) gamma / k!. Throws DomainError when h is found to
// be asymmetric or not {0,1}-valued on random probes.
SteinBound ustat_gamma(std::size_t k, const Selection& h, double s, const ProbabilityMeasure& measure,
                       const IntegrationOptions& options = {});

struct CalibrationRequest {
    double s = 1.0;
    double target_alpha = 1.0;
    StatisticId statistic{};
    double tolerance = 1e-9;
    std::optional<std::pair<double, double>> bracket; // default per family
    IntegrationOptions integration{};
};

struct CalibrationResult {
    ConnectionFunction phi;
    double knob = 0.0;
    double achieved = 0.0;
    std::size_t iterations = 0;
    EstimateMethod method = EstimateMethod::ClosedForm;
};

// Default search interval for the family's knob.
std::pair<double, double> default_bracket(const ConnectionFunction& phi,
                                          const ProbabilityMeasure& measure);

// Bisection on the knob of `phi` until |E stat - target| <= tolerance. Monte
// Carlo evaluations reuse one integration seed, so the search is deterministic.
// Throws CalibrationError when the interval does not bracket the target.
CalibrationResult calibrate_parameter(const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                                      const CalibrationRequest& request);

struct RatioCheck {
    double ratio = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double a_s = 0.0; // sup g
    double epsilon = 1.0;
    double std_error = 0.0; // of ratio
    bool pass = false;
};

// E D_i / E D_{i-1} against [eps s a_s / i, s a_s / i]. Without an explicit
// epsilon the homogeneity estimate is used.
RatioCheck degree_ratio_check(double s, const ConnectionFunction& phi, const ProbabilityMeasure& measure,
                              std::size_t i, std::optional<double> epsilon = std::nullopt,
                              const IntegrationOptions& options = {});

} // namespace irg
