#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "irg/rng.hpp"

namespace irg {

inline constexpr int kMaxDimension = 8;

struct Point {
    std::array<double, kMaxDimension> coords{};
    int dim = 0;

    Point() = default;
    explicit Point(int dimension);
    Point(std::initializer_list<double> values);

    double operator[](std::size_t i) const { return coords[i]; }
    double& operator[](std::size_t i) { return coords[i]; }
    int dimension() const noexcept { return dim; }
    std::span<const double> values() const { return {coords.data(), static_cast<std::size_t>(dim)}; }

    friend bool operator==(const Point& a, const Point& b) noexcept;
};

enum class SpaceKind { UnitCube, Torus, Euclidean };
enum class DensityKind { Uniform, Gaussian, Weibull, Tabulated };

std::string to_string(SpaceKind kind);
std::string to_string(DensityKind kind);

// Value with an attached Monte Carlo standard error; exact values carry zero.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
    std::size_t samples = 0;
    bool exact = false;
};

// Volume of the d-dimensional unit ball.
double unit_ball_volume(int d);

// A diffuse probability measure on [0,1)^d (cube or flat torus) or on R^d.
// Immutable after construction.
class ProbabilityMeasure {
public:
    static ProbabilityMeasure uniform(SpaceKind kind, int dimension);
    static ProbabilityMeasure gaussian(int dimension);
    static ProbabilityMeasure weibull(int dimension, double shape, double scale);
    // Piecewise-constant density on a regular grid of `bins` cells per axis over
    // [0,1)^d, cell values in row-major order (last axis fastest).
    static ProbabilityMeasure tabulated(SpaceKind kind, int dimension, int bins,
                                        std::vector<double> values);

    SpaceKind space() const noexcept { return space_; }
    DensityKind density_kind() const noexcept { return density_; }
    int dimension() const noexcept { return dim_; }
    double weibull_shape() const noexcept { return shape_; }
    double weibull_scale() const noexcept { return scale_; }
    int bins() const noexcept { return bins_; }
    std::span<const double> table() const noexcept { return table_; }

    bool is_uniform_box() const noexcept
    {
        return density_ == DensityKind::Uniform && space_ != SpaceKind::Euclidean;
    }
    bool is_uniform_torus() const noexcept
    {
        return density_ == DensityKind::Uniform && space_ == SpaceKind::Torus;
    }

    Point sample(RandomState& rng) const;

    // dmu/dLebesgue at p. Torus coordinates are reduced mod 1 first; points
    // outside the support raise DomainError.
    double density(const Point& p) const;

    bool in_support(const Point& p) const;

    // Squared distance under the space's metric (minimal-image for the torus).
    double distance_sq(const Point& a, const Point& b) const noexcept;
    double distance(const Point& a, const Point& b) const noexcept;

    // Largest possible distance between two points of the support (infinite for
    // unbounded supports).
    double diameter() const noexcept;

private:
    ProbabilityMeasure() = default;

    void check_point(const Point& p) const;

    SpaceKind space_ = SpaceKind::UnitCube;
    DensityKind density_ = DensityKind::Uniform;
    int dim_ = 1;
    double shape_ = 1.0;
    double scale_ = 1.0;
    int bins_ = 0;
    std::vector<double> table_;
    std::vector<double> cumulative_;
};

Point sample_point(const ProbabilityMeasure& measure, RandomState& rng);

struct BallMeasureOptions {
    std::size_t samples = 100000;
    std::uint64_t seed = 0x5EED;
};

// mu(B_radius(center)). Closed form where available (torus-uniform with
// radius < 1/2, one-dimensional cube-uniform, radius zero or covering the
// whole support); otherwise a Monte Carlo estimate with common random numbers
// across radii, so estimates are monotone in the radius.
Estimate ball_measure(const ProbabilityMeasure& measure, const Point& center, double radius,
                      const BallMeasureOptions& options = {});

} // namespace irg
