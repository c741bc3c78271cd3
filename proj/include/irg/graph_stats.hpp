#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "irg/graph.hpp"

namespace irg {

// D_j: number of vertices of degree j, stored sparsely.
struct DegreeHistogram {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t vertex_total = 0;

    std::uint64_t count(std::size_t j) const;
    // D_{<=j}
    std::uint64_t at_most(std::size_t j) const;
};

// N_k: number of connected components with exactly k vertices.
struct ComponentSummary {
    std::map<std::size_t, std::uint64_t> counts;
    std::uint64_t component_total = 0;

    std::uint64_t count(std::size_t k) const;
};

DegreeHistogram degree_counts(const Graph& g);
ComponentSummary component_counts(const Graph& g);

// Degree histogram, component sizes and edge count accumulated from an edge
// stream (see visit_edges), without storing the graph.
class StreamingCounter final : public EdgeVisitor {
public:
    // Component tracking (union-find) can be switched off when only degrees
    // and the edge count are needed.
    explicit StreamingCounter(std::size_t vertex_count, bool track_components = true);

    void operator()(std::uint32_t u, std::uint32_t v) override;

    std::uint64_t edge_count() const noexcept { return edges_; }
    DegreeHistogram degrees() const;
    ComponentSummary components();

private:
    std::uint32_t find(std::uint32_t v) noexcept;

    std::vector<std::uint32_t> degree_;
    std::vector<std::uint32_t> parent_;
    std::vector<std::uint32_t> size_;
    std::uint64_t edges_ = 0;
    bool track_components_ = true;
};

inline constexpr std::size_t kMaxInducedOrder = 5;

// H_k: number of k-vertex subsets inducing a connected subgraph, 2 <= k <= 5.
// H_2 is the edge count.
std::uint64_t connected_induced_count(const Graph& g, std::size_t k);

} // namespace irg
