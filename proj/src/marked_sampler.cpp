#include "irg/marked_sampler.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

#include "irg/error.hpp"

namespace irg {

MarkStream::MarkStream(std::uint64_t seed, std::uint64_t owner)
    : seed_(seed), owner_(owner), key_(mix64(derive_key(seed, stream::kMark, owner)))
{
}

LowMarkCursor::LowMarkCursor(std::uint64_t seed, std::uint64_t owner, double q)
    : rng_(derive_key(seed, stream::kLowMark, owner)), q_(q), log_keep_(std::log1p(-q))
{
}

std::pair<std::uint64_t, double> LowMarkCursor::next() noexcept
{
    constexpr auto kFar = static_cast<double>(std::uint64_t{1} << 62);
    if (q_ >= 1.0) {
        ++position_;
        return {position_, rng_.uniform()};
    }
    if (q_ <= 0.0) {
        position_ = std::numeric_limits<std::uint64_t>::max();
        return {position_, 1.0};
    }
    const double skip = std::floor(std::log(rng_.uniform()) / log_keep_);
    if (skip >= kFar || position_ >= (std::uint64_t{1} << 62)) {
        position_ = std::numeric_limits<std::uint64_t>::max();
        return {position_, 1.0};
    }
    position_ += 1 + static_cast<std::uint64_t>(skip);
    return {position_, q_ * rng_.uniform()};
}

namespace {

MarkedConfiguration sample_points(const ProbabilityMeasure& measure, std::size_t n,
                                  std::uint64_t seed)
{
    MarkedConfiguration config;
    config.seed = seed;
    config.points.reserve(n);
    config.marks.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        RandomState rng(derive_key(seed, stream::kPoint, i));
        config.points.push_back(measure.sample(rng));
        config.marks.emplace_back(seed, i);
    }
    return config;
}

} // namespace

MarkedConfiguration sample_poisson_configuration(const ProbabilityMeasure& measure, double s,
                                                 std::uint64_t seed)
{
    if (!(s > 0.0) || !std::isfinite(s)) {
        throw ConfigError("Poisson intensity s must be positive and finite");
    }
    RandomState count_rng(derive_key(seed, stream::kCount));
    const auto n = static_cast<std::size_t>(sample_poisson(count_rng, s));
    MarkedConfiguration config = sample_points(measure, n, seed);
    config.process = ProcessKind::Poisson;
    config.intensity = s;
    return config;
}

MarkedConfiguration sample_binomial_configuration(const ProbabilityMeasure& measure, std::size_t n,
                                                  std::uint64_t seed)
{
    if (n == 0) {
        throw ConfigError("binomial count n must be at least 1");
    }
    MarkedConfiguration config = sample_points(measure, n, seed);
    config.process = ProcessKind::Binomial;
    config.count = n;
    return config;
}

std::string to_string(Construction c)
{
    return c == Construction::Ordered ? "ordered" : "sequential";
}

std::string to_string(EdgeSampling s)
{
    switch (s) {
    case EdgeSampling::Auto: return "auto";
    case EdgeSampling::Exact: return "exact";
    case EdgeSampling::Thinned: return "thinned";
    }
    return "unknown";
}

EdgeSampling resolve_sampling(const ConnectionFunction& phi, EdgeSampling requested)
{
    if (requested != EdgeSampling::Auto) {
        return requested;
    }
    if (std::isfinite(phi.support_radius())) {
        return EdgeSampling::Exact;
    }
    return phi.sup_phi() <= kThinningThreshold ? EdgeSampling::Thinned : EdgeSampling::Exact;
}

namespace {

// Vertices in rank order together with their mark streams.
struct RankedVertices {
    std::vector<Point> points;
    std::vector<MarkStream> marks;
};

class EdgeDecider {
public:
    EdgeDecider(const RankedVertices& ranked, const ConnectionFunction& phi)
        : ranked_(ranked), phi_(phi)
    {
    }

    // Ranks a < b.
    bool operator()(std::uint32_t a, std::uint32_t b) const noexcept
    {
        const double p = phi_(ranked_.points[a], ranked_.points[b]);
        if (p <= 0.0) {
            return false;
        }
        if (p >= 1.0) {
            return true;
        }
        return ranked_.marks[a].value(static_cast<std::uint64_t>(b) + 1) <= p;
    }

private:
    const RankedVertices& ranked_;
    const ConnectionFunction& phi_;
};

class EdgeCollector final : public EdgeVisitor {
public:
    void operator()(std::uint32_t u, std::uint32_t v) override { edges.push_back({u, v}); }

    std::vector<Edge> edges;
};

void all_pairs_exact(const RankedVertices& ranked, const ConnectionFunction& phi, EdgeVisitor& visit)
{
    const auto n = static_cast<std::uint32_t>(ranked.points.size());
    EdgeDecider decide(ranked, phi);
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) {
            if (decide(a, b)) {
                visit(a, b);
            }
        }
    }
}

constexpr int kGridMaxDimension = 3;

// Candidate pairs from cells of width >= radius. Returns false when the grid
// is not applicable and the caller should fall back to all pairs.
bool grid_exact(const RankedVertices& ranked, const ConnectionFunction& phi, EdgeVisitor& visit)
{
    const double radius = phi.support_radius();
    const std::size_t n = ranked.points.size();
    if (!std::isfinite(radius) || n < 2) {
        return false;
    }
    const int d = ranked.points.front().dim;
    if (d > kGridMaxDimension) {
        return false;
    }
    if (radius <= 0.0) {
        return true; // phi vanishes off the diagonal
    }
    const bool wrap = phi.metric() == SpaceKind::Torus;
    // Slightly inflated so rounding in cell assignment never separates a
    // pair at distance exactly `radius` by two cells.
    const double reach = radius * (1.0 + 1e-9);

    std::array<double, kGridMaxDimension> lo{};
    std::array<double, kGridMaxDimension> width{};
    std::array<std::size_t, kGridMaxDimension> cells{1, 1, 1};
    const double per_axis_cap = std::max(1.0, std::floor(std::pow(4.0 * n, 1.0 / d)));
    for (int i = 0; i < d; ++i) {
        if (wrap) {
            const double m = std::floor(1.0 / reach);
            if (m < 3.0) {
                return false;
            }
            cells[i] = static_cast<std::size_t>(std::min(m, per_axis_cap));
            if (cells[i] < 3) {
                return false;
            }
            lo[i] = 0.0;
            width[i] = 1.0 / static_cast<double>(cells[i]);
        } else {
            double mn = std::numeric_limits<double>::infinity();
            double mx = -mn;
            for (const Point& p : ranked.points) {
                mn = std::min(mn, p[i]);
                mx = std::max(mx, p[i]);
            }
            const double extent = mx - mn;
            const double m = std::max(1.0, std::min(std::floor(extent / reach), per_axis_cap));
            cells[i] = static_cast<std::size_t>(m);
            lo[i] = mn;
            width[i] = cells[i] > 1 ? extent / m : std::numeric_limits<double>::infinity();
        }
    }

    std::size_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= cells[i];
    }
    auto cell_coord = [&](const Point& p, int axis) {
        if (!std::isfinite(width[axis])) {
            return std::size_t{0};
        }
        const double x = wrap ? p[axis] - std::floor(p[axis]) : p[axis];
        auto c = static_cast<std::size_t>(std::max(0.0, (x - lo[axis]) / width[axis]));
        return std::min(c, cells[axis] - 1);
    };

    std::vector<std::size_t> cell_of(n);
    std::vector<std::size_t> start(total + 1, 0);
    for (std::size_t v = 0; v < n; ++v) {
        std::size_t c = 0;
        for (int i = 0; i < d; ++i) {
            c = c * cells[i] + cell_coord(ranked.points[v], i);
        }
        cell_of[v] = c;
        ++start[c + 1];
    }
    for (std::size_t c = 0; c < total; ++c) {
        start[c + 1] += start[c];
    }
    std::vector<std::uint32_t> members(n);
    {
        std::vector<std::size_t> cursor(start.begin(), start.end() - 1);
        for (std::size_t v = 0; v < n; ++v) {
            members[cursor[cell_of[v]]++] = static_cast<std::uint32_t>(v);
        }
    }

    // Neighbor offsets in {-1,0,1}^d; axes with a single cell only take 0.
    std::vector<std::array<long, kGridMaxDimension>> deltas;
    {
        std::size_t combos = 1;
        for (int i = 0; i < d; ++i) {
            combos *= 3;
        }
        for (std::size_t o = 0; o < combos; ++o) {
            std::array<long, kGridMaxDimension> delta{};
            std::size_t code = o;
            bool keep = true;
            for (int i = 0; i < d; ++i) {
                delta[i] = static_cast<long>(code % 3) - 1;
                code /= 3;
                if (cells[i] == 1 && delta[i] != 0) {
                    keep = false;
                }
            }
            if (keep) {
                deltas.push_back(delta);
            }
        }
    }

    EdgeDecider decide(ranked, phi);
    std::array<long, kGridMaxDimension> coord{};
    for (std::size_t c = 0; c < total; ++c) {
        if (start[c] == start[c + 1]) {
            continue;
        }
        std::size_t rest = c;
        for (int i = d - 1; i >= 0; --i) {
            coord[i] = static_cast<long>(rest % cells[i]);
            rest /= cells[i];
        }
        for (const auto& delta : deltas) {
            std::size_t neighbor = 0;
            bool valid = true;
            for (int i = 0; i < d && valid; ++i) {
                const auto m = static_cast<long>(cells[i]);
                long target = coord[i] + delta[i];
                if (wrap) {
                    target = (target + m) % m;
                } else if (target < 0 || target >= m) {
                    valid = false;
                }
                neighbor = neighbor * cells[i] + static_cast<std::size_t>(target);
            }
            if (!valid) {
                continue;
            }
            for (std::size_t ia = start[c]; ia < start[c + 1]; ++ia) {
                const std::uint32_t a = members[ia];
                for (std::size_t ib = start[neighbor]; ib < start[neighbor + 1]; ++ib) {
                    const std::uint32_t b = members[ib];
                    if (b > a && decide(a, b)) {
                        visit(a, b);
                    }
                }
            }
        }
    }
    return true;
}

void thinned(const RankedVertices& ranked, const ConnectionFunction& phi, EdgeVisitor& visit)
{
    const std::uint64_t n = ranked.points.size();
    const double q = phi.sup_phi();
    if (q <= 0.0) {
        return;
    }
    for (std::uint64_t a = 0; a < n; ++a) {
        const MarkStream& mark = ranked.marks[a];
        LowMarkCursor cursor(mark.seed(), mark.owner(), q);
        for (;;) {
            const auto [position, t] = cursor.next();
            if (position > n) {
                break;
            }
            const std::uint64_t b = position - 1;
            if (b <= a) {
                continue;
            }
            if (t <= phi(ranked.points[a], ranked.points[b])) {
                visit(static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b));
            }
        }
    }
}

void generate(const RankedVertices& ranked, const ConnectionFunction& phi, const BuildOptions& options,
              EdgeVisitor& visit)
{
    if (ranked.points.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw CapabilityError("configuration too large for 32-bit vertex indices");
    }
    if (resolve_sampling(phi, options.sampling) == EdgeSampling::Thinned) {
        thinned(ranked, phi, visit);
    } else if (!(options.use_grid && grid_exact(ranked, phi, visit))) {
        all_pairs_exact(ranked, phi, visit);
    }
}

Graph build_ranked(RankedVertices ranked, const ConnectionFunction& phi, const BuildOptions& options)
{
    EdgeCollector collect;
    generate(ranked, phi, options, collect);
    return Graph(std::move(ranked.points), std::move(collect.edges));
}

RankedVertices rank_by_order_key(const MarkedConfiguration& config)
{
    const std::size_t n = config.size();
    std::vector<std::pair<double, std::uint64_t>> keys(n);
    for (std::size_t i = 0; i < n; ++i) {
        keys[i] = {config.marks[i].order_key(), config.marks[i].owner()};
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    RankedVertices ranked;
    ranked.points.reserve(n);
    ranked.marks.reserve(n);
    for (std::size_t i : order) {
        ranked.points.push_back(config.points[i]);
        ranked.marks.push_back(config.marks[i]);
    }
    return ranked;
}

} // namespace

Graph build_graph_ordered(const MarkedConfiguration& config, const ConnectionFunction& phi,
                          const BuildOptions& options)
{
    return build_ranked(rank_by_order_key(config), phi, options);
}

Graph build_graph_sequential(const MarkedConfiguration& config, const ConnectionFunction& phi,
                             const BuildOptions& options)
{
    return build_ranked({config.points, config.marks}, phi, options);
}

Graph build_graph(const MarkedConfiguration& config, const ConnectionFunction& phi,
                  Construction construction, const BuildOptions& options)
{
    return construction == Construction::Ordered ? build_graph_ordered(config, phi, options)
                                                 : build_graph_sequential(config, phi, options);
}

void visit_edges(const MarkedConfiguration& config, const ConnectionFunction& phi,
                 Construction construction, const BuildOptions& options, EdgeVisitor& visit)
{
    if (construction == Construction::Ordered) {
        generate(rank_by_order_key(config), phi, options, visit);
    } else {
        generate({config.points, config.marks}, phi, options, visit);
    }
}

} // namespace irg
