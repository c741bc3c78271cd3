#include "irg/graph.hpp"

#include <algorithm>
#include <string>

#include "irg/error.hpp"

namespace irg {

Graph::Graph(std::vector<Point> points, std::vector<Edge> edges)
    : vertex_count_(points.size()), points_(std::move(points)), edges_(std::move(edges))
{
    finalize();
}

Graph::Graph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges))
{
    finalize();
}

void Graph::finalize()
{
    bool sorted = true;
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        Edge& e = edges_[i];
        if (e.u == e.v) {
            throw DomainError("self-loop at vertex " + std::to_string(e.u));
        }
        if (e.u > e.v) {
            std::swap(e.u, e.v);
        }
        if (e.v >= vertex_count_) {
            throw DomainError("edge endpoint " + std::to_string(e.v) + " out of range");
        }
        if (i > 0 && !(edges_[i - 1] < e)) {
            sorted = false;
        }
    }
    if (!sorted) {
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw DomainError("duplicate edge");
        }
    }

    offsets_.assign(vertex_count_ + 1, 0);
    for (const Edge& e : edges_) {
        ++offsets_[e.u + 1];
        ++offsets_[e.v + 1];
    }
    for (std::size_t v = 0; v < vertex_count_; ++v) {
        offsets_[v + 1] += offsets_[v];
    }
    neighbors_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    // Lower neighbors first, then higher; sorted edges keep both runs ascending.
    for (const Edge& e : edges_) {
        neighbors_[cursor[e.v]++] = e.u;
    }
    for (const Edge& e : edges_) {
        neighbors_[cursor[e.u]++] = e.v;
    }
}

bool Graph::has_edge(std::size_t a, std::size_t b) const noexcept
{
    if (a >= vertex_count_ || b >= vertex_count_) {
        return false;
    }
    auto list = neighbors(a);
    return std::binary_search(list.begin(), list.end(), static_cast<std::uint32_t>(b));
}

Graph Graph::induced_prefix(std::size_t n) const
{
    n = std::min(n, vertex_count_);
    std::vector<Edge> kept;
    for (const Edge& e : edges_) {
        if (e.v < n) {
            kept.push_back(e);
        }
    }
    if (points_.empty()) {
        return Graph(n, std::move(kept));
    }
    return Graph(std::vector<Point>(points_.begin(), points_.begin() + static_cast<std::ptrdiff_t>(n)),
                 std::move(kept));
}

} // namespace irg
