#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "irg/connection.hpp"
#include "irg/graph.hpp"
#include "irg/statespace.hpp"

namespace irg {

// The infinite mark sequence (t_0, t_1, t_2, ...) of one point: independent
// uniforms addressed by position through a keyed counter hash, so no prefix
// is ever materialized. t_0 orders the points; t_j decides the pair formed
// with the point of rank j.
class MarkStream {
public:
    MarkStream() = default;
    MarkStream(std::uint64_t seed, std::uint64_t owner);

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t owner() const noexcept { return owner_; }

    double value(std::uint64_t position) const noexcept
    {
        return to_unit_open(mix64(key_ + (position + 1) * kGolden));
    }
    double order_key() const noexcept { return value(0); }

    friend bool operator==(const MarkStream&, const MarkStream&) = default;

private:
    std::uint64_t seed_ = 0;
    std::uint64_t owner_ = 0;
    std::uint64_t key_ = 0;
};

// Sparse representation of a mark sequence restricted to the positions whose
// value is at most q: positions >= 1 form a Bernoulli(q) sequence (geometric
// gaps) and the values there are uniform on (0, q]. For any phi <= q this
// realizes the same edge law as the dense stream while touching only the
// O(q * n) positions that can produce an edge.
class LowMarkCursor {
public:
    LowMarkCursor(std::uint64_t seed, std::uint64_t owner, double q);

    // Next (position, value) pair with value <= q; positions strictly increase.
    std::pair<std::uint64_t, double> next() noexcept;

private:
    RandomState rng_;
    double q_;
    double log_keep_; // log(1 - q)
    std::uint64_t position_ = 0;
};

enum class ProcessKind { Poisson, Binomial };

struct MarkedConfiguration {
    std::vector<Point> points;
    std::vector<MarkStream> marks; // aligned with points
    ProcessKind process = ProcessKind::Poisson;
    double intensity = 0.0; // Poisson only
    std::size_t count = 0; // Binomial only
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return points.size(); }
};

// Point i is drawn from its own stream derived from (seed, i), and carries
// mark stream (seed, i); the Poisson and binomial samplers therefore share
// the point sequence and the binomial configuration with n <= Z_s is a prefix
// of the Poisson one.
MarkedConfiguration sample_poisson_configuration(const ProbabilityMeasure& measure, double s,
                                                 std::uint64_t seed);
MarkedConfiguration sample_binomial_configuration(const ProbabilityMeasure& measure, std::size_t n,
                                                  std::uint64_t seed);

enum class Construction { Ordered, Sequential };
enum class EdgeSampling { Auto, Exact, Thinned };

std::string to_string(Construction c);
std::string to_string(EdgeSampling s);

struct BuildOptions {
    EdgeSampling sampling = EdgeSampling::Auto;
    // Candidate pairs from a uniform cell grid for compactly supported kernels
    // (d <= 3). Exact sampling yields the same edges with or without it.
    bool use_grid = true;
};

// Auto resolves to Thinned when sup phi <= this and the kernel has no compact
// support; otherwise Exact.
inline constexpr double kThinningThreshold = 0.25;

EdgeSampling resolve_sampling(const ConnectionFunction& phi, EdgeSampling requested);

// G_phi(xi): vertices ranked by t_0 (ties by owner index); for ranks i < j the
// edge is present iff t_{i, j+1} of the rank-i point is <= phi(x_i, x_j).
// Vertex v of the result is the point of rank v.
Graph build_graph_ordered(const MarkedConfiguration& config, const ConnectionFunction& phi,
                          const BuildOptions& options = {});

// G(X_n, phi): the same rule with ranks given by storage index, so the graph on
// the first n points is the induced subgraph of the graph on the first m >= n.
Graph build_graph_sequential(const MarkedConfiguration& config, const ConnectionFunction& phi,
                             const BuildOptions& options = {});

Graph build_graph(const MarkedConfiguration& config, const ConnectionFunction& phi,
                  Construction construction, const BuildOptions& options = {});

// Streams the edges of build_graph(config, phi, construction, options) to
// `visit` in unspecified order without storing them. Endpoints are vertex
// indices of the graph build_graph would return.
void visit_edges(const MarkedConfiguration& config, const ConnectionFunction& phi,
                 Construction construction, const BuildOptions& options, EdgeVisitor& visit);

} // namespace irg
