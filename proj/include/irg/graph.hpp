#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "irg/statespace.hpp"

namespace irg {

struct Edge {
    std::uint32_t u; // u < v
    std::uint32_t v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Receives edges (u < v) as they are generated.
class EdgeVisitor {
public:
    virtual ~EdgeVisitor() = default;
    virtual void operator()(std::uint32_t u, std::uint32_t v) = 0;
};

// Simple undirected graph on vertices 0..n-1 with positions attached.
// Immutable after construction; edges are stored sorted with u < v and
// adjacency in compressed sparse row form.
class Graph {
public:
    Graph() = default;
    // Throws DomainError on self-loops, duplicate edges or out-of-range ends.
    // Edges may be given in either orientation and any order.
    Graph(std::vector<Point> points, std::vector<Edge> edges);
    // Vertices without positions (used by tests and hand-built graphs).
    Graph(std::size_t vertex_count, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    std::span<const Edge> edges() const noexcept { return edges_; }
    std::span<const Point> points() const noexcept { return points_; }

    std::size_t degree(std::size_t v) const noexcept { return offsets_[v + 1] - offsets_[v]; }
    std::span<const std::uint32_t> neighbors(std::size_t v) const noexcept
    {
        return {neighbors_.data() + offsets_[v], degree(v)};
    }
    bool has_edge(std::size_t a, std::size_t b) const noexcept;

    // Subgraph induced by vertices 0..n-1.
    Graph induced_prefix(std::size_t n) const;

private:
    void finalize();

    std::size_t vertex_count_ = 0;
    std::vector<Point> points_;
    std::vector<Edge> edges_;
    std::vector<std::size_t> offsets_{0};
    std::vector<std::uint32_t> neighbors_;
};

} // namespace irg
