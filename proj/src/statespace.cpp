#include "irg/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "irg/error.hpp"

namespace irg {

Point::Point(int dimension) : dim(dimension)
{
    if (dimension < 1 || dimension > kMaxDimension) {
        throw ConfigError("point dimension must be in [1, " + std::to_string(kMaxDimension) + "]");
    }
}

Point::Point(std::initializer_list<double> values) : Point(static_cast<int>(values.size()))
{
    std::copy(values.begin(), values.end(), coords.begin());
}

bool operator==(const Point& a, const Point& b) noexcept
{
    if (a.dim != b.dim) {
        return false;
    }
    for (int i = 0; i < a.dim; ++i) {
        if (a.coords[i] != b.coords[i]) {
            return false;
        }
    }
    return true;
}

std::string to_string(SpaceKind kind)
{
    switch (kind) {
    case SpaceKind::UnitCube: return "unit-cube";
    case SpaceKind::Torus: return "torus";
    case SpaceKind::Euclidean: return "euclidean";
    }
    return "unknown";
}

std::string to_string(DensityKind kind)
{
    switch (kind) {
    case DensityKind::Uniform: return "uniform";
    case DensityKind::Gaussian: return "isotropic-gaussian";
    case DensityKind::Weibull: return "product-weibull";
    case DensityKind::Tabulated: return "user-tabulated";
    }
    return "unknown";
}

double unit_ball_volume(int d)
{
    const double half = 0.5 * d;
    return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

namespace {

void check_dimension(int d)
{
    if (d < 1 || d > kMaxDimension) {
        throw ConfigError("dimension must be in [1, " + std::to_string(kMaxDimension) + "], got " +
                          std::to_string(d));
    }
}

} // namespace

ProbabilityMeasure ProbabilityMeasure::uniform(SpaceKind kind, int dimension)
{
    check_dimension(dimension);
    if (kind == SpaceKind::Euclidean) {
        throw ConfigError("uniform density requires a bounded space (unit-cube or torus)");
    }
    ProbabilityMeasure m;
    m.space_ = kind;
    m.density_ = DensityKind::Uniform;
    m.dim_ = dimension;
    return m;
}

ProbabilityMeasure ProbabilityMeasure::gaussian(int dimension)
{
    check_dimension(dimension);
    ProbabilityMeasure m;
    m.space_ = SpaceKind::Euclidean;
    m.density_ = DensityKind::Gaussian;
    m.dim_ = dimension;
    return m;
}

ProbabilityMeasure ProbabilityMeasure::weibull(int dimension, double shape, double scale)
{
    check_dimension(dimension);
    if (!(shape > 0.0) || !(scale > 0.0) || !std::isfinite(shape) || !std::isfinite(scale)) {
        throw ConfigError("product-weibull requires positive finite shape and scale");
    }
    ProbabilityMeasure m;
    m.space_ = SpaceKind::Euclidean;
    m.density_ = DensityKind::Weibull;
    m.dim_ = dimension;
    m.shape_ = shape;
    m.scale_ = scale;
    return m;
}

ProbabilityMeasure ProbabilityMeasure::tabulated(SpaceKind kind, int dimension, int bins,
                                                 std::vector<double> values)
{
    check_dimension(dimension);
    if (kind == SpaceKind::Euclidean) {
        throw ConfigError("user-tabulated density is defined on the unit cube or torus only");
    }
    if (bins < 1) {
        throw ConfigError("user-tabulated density needs at least one bin per axis");
    }
    const double cells = std::pow(static_cast<double>(bins), dimension);
    if (cells > 1e7 || static_cast<double>(values.size()) != cells) {
        throw ConfigError("user-tabulated density expects bins^dimension = " +
                          std::to_string(static_cast<long long>(cells)) + " values, got " +
                          std::to_string(values.size()));
    }
    double mass = 0.0;
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("user-tabulated density values must be finite and nonnegative");
        }
        mass += v;
    }
    mass /= cells;
    if (std::fabs(mass - 1.0) > 1e-6) {
        throw ConfigError("user-tabulated density must integrate to 1, got " + std::to_string(mass));
    }
    ProbabilityMeasure m;
    m.space_ = kind;
    m.density_ = DensityKind::Tabulated;
    m.dim_ = dimension;
    m.bins_ = bins;
    m.table_ = std::move(values);
    m.cumulative_.resize(m.table_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < m.table_.size(); ++i) {
        acc += m.table_[i];
        m.cumulative_[i] = acc;
    }
    return m;
}

Point ProbabilityMeasure::sample(RandomState& rng) const
{
    Point p(dim_);
    switch (density_) {
    case DensityKind::Uniform:
        for (int i = 0; i < dim_; ++i) {
            p[i] = rng.uniform();
        }
        break;
    case DensityKind::Gaussian:
        for (int i = 0; i < dim_; ++i) {
            p[i] = rng.normal();
        }
        break;
    case DensityKind::Weibull:
        for (int i = 0; i < dim_; ++i) {
            p[i] = scale_ * std::pow(rng.exponential(), 1.0 / shape_);
        }
        break;
    case DensityKind::Tabulated: {
        const double target = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        auto cell = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
            it - cumulative_.begin(), static_cast<std::ptrdiff_t>(cumulative_.size()) - 1));
        const double width = 1.0 / bins_;
        for (int i = dim_ - 1; i >= 0; --i) {
            const auto index = cell % static_cast<std::size_t>(bins_);
            cell /= static_cast<std::size_t>(bins_);
            p[i] = std::min((static_cast<double>(index) + rng.uniform()) * width,
                            std::nextafter(1.0, 0.0));
        }
        break;
    }
    }
    return p;
}

bool ProbabilityMeasure::in_support(const Point& p) const
{
    if (p.dim != dim_) {
        return false;
    }
    for (int i = 0; i < dim_; ++i) {
        const double x = p[i];
        if (!std::isfinite(x)) {
            return false;
        }
        if (space_ == SpaceKind::UnitCube && (x < 0.0 || x >= 1.0)) {
            return false;
        }
        if (density_ == DensityKind::Weibull && x < 0.0) {
            return false;
        }
    }
    return true;
}

void ProbabilityMeasure::check_point(const Point& p) const
{
    if (!in_support(p)) {
        throw DomainError("point lies outside the support of the " + to_string(density_) +
                          " measure on " + to_string(space_));
    }
}

double ProbabilityMeasure::density(const Point& p) const
{
    check_point(p);
    Point q = p;
    if (space_ == SpaceKind::Torus) {
        for (int i = 0; i < dim_; ++i) {
            q[i] -= std::floor(q[i]);
        }
    }
    switch (density_) {
    case DensityKind::Uniform:
        return 1.0;
    case DensityKind::Gaussian: {
        double r2 = 0.0;
        for (int i = 0; i < dim_; ++i) {
            r2 += q[i] * q[i];
        }
        return std::exp(-0.5 * r2) / std::pow(2.0 * std::numbers::pi, 0.5 * dim_);
    }
    case DensityKind::Weibull: {
        double f = 1.0;
        for (int i = 0; i < dim_; ++i) {
            const double z = q[i] / scale_;
            f *= (shape_ / scale_) * std::pow(z, shape_ - 1.0) * std::exp(-std::pow(z, shape_));
        }
        return f;
    }
    case DensityKind::Tabulated: {
        std::size_t cell = 0;
        for (int i = 0; i < dim_; ++i) {
            auto index = static_cast<std::size_t>(q[i] * bins_);
            index = std::min(index, static_cast<std::size_t>(bins_ - 1));
            cell = cell * static_cast<std::size_t>(bins_) + index;
        }
        return table_[cell];
    }
    }
    return 0.0;
}

double ProbabilityMeasure::distance_sq(const Point& a, const Point& b) const noexcept
{
    double acc = 0.0;
    if (space_ == SpaceKind::Torus) {
        for (int i = 0; i < dim_; ++i) {
            double d = std::fabs(a[i] - b[i]);
            d -= std::floor(d);
            d = std::min(d, 1.0 - d);
            acc += d * d;
        }
    } else {
        for (int i = 0; i < dim_; ++i) {
            const double d = a[i] - b[i];
            acc += d * d;
        }
    }
    return acc;
}

double ProbabilityMeasure::distance(const Point& a, const Point& b) const noexcept
{
    return std::sqrt(distance_sq(a, b));
}

double ProbabilityMeasure::diameter() const noexcept
{
    switch (space_) {
    case SpaceKind::Torus: return 0.5 * std::sqrt(static_cast<double>(dim_));
    case SpaceKind::UnitCube: return std::sqrt(static_cast<double>(dim_));
    case SpaceKind::Euclidean: return std::numeric_limits<double>::infinity();
    }
    return std::numeric_limits<double>::infinity();
}

Point sample_point(const ProbabilityMeasure& measure, RandomState& rng)
{
    return measure.sample(rng);
}

Estimate ball_measure(const ProbabilityMeasure& measure, const Point& center, double radius,
                      const BallMeasureOptions& options)
{
    if (!(radius >= 0.0)) {
        throw DomainError("ball radius must be nonnegative");
    }
    if (radius == 0.0) {
        return {0.0, 0.0, 0, true};
    }
    if (radius >= measure.diameter()) {
        return {1.0, 0.0, 0, true};
    }
    if (measure.is_uniform_torus() && radius < 0.5) {
        return {unit_ball_volume(measure.dimension()) * std::pow(radius, measure.dimension()), 0.0,
                0, true};
    }
    if (measure.is_uniform_box() && measure.space() == SpaceKind::UnitCube &&
        measure.dimension() == 1) {
        const double lo = std::max(0.0, center[0] - radius);
        const double hi = std::min(1.0, center[0] + radius);
        return {std::max(0.0, hi - lo), 0.0, 0, true};
    }
    const double r2 = radius * radius;
    RandomState rng(derive_key(options.seed, stream::kProbe));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < options.samples; ++i) {
        if (measure.distance_sq(center, measure.sample(rng)) <= r2) {
            ++hits;
        }
    }
    const double n = static_cast<double>(options.samples);
    const double p = static_cast<double>(hits) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), options.samples, false};
}

} // namespace irg
