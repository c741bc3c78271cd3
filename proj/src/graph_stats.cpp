#include "irg/graph_stats.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "irg/error.hpp"

namespace irg {

std::uint64_t DegreeHistogram::count(std::size_t j) const
{
    auto it = counts.find(j);
    return it == counts.end() ? 0 : it->second;
}

std::uint64_t DegreeHistogram::at_most(std::size_t j) const
{
    std::uint64_t total = 0;
    for (const auto& [degree, n] : counts) {
        if (degree > j) {
            break;
        }
        total += n;
    }
    return total;
}

std::uint64_t ComponentSummary::count(std::size_t k) const
{
    auto it = counts.find(k);
    return it == counts.end() ? 0 : it->second;
}

DegreeHistogram degree_counts(const Graph& g)
{
    DegreeHistogram h;
    h.vertex_total = g.vertex_count();
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        ++h.counts[g.degree(v)];
    }
    return h;
}

StreamingCounter::StreamingCounter(std::size_t vertex_count, bool track_components)
    : degree_(vertex_count, 0), track_components_(track_components)
{
    if (track_components_) {
        parent_.resize(vertex_count);
        size_.assign(vertex_count, 1);
        std::iota(parent_.begin(), parent_.end(), 0u);
    }
}

std::uint32_t StreamingCounter::find(std::uint32_t v) noexcept
{
    while (parent_[v] != v) {
        parent_[v] = parent_[parent_[v]];
        v = parent_[v];
    }
    return v;
}

void StreamingCounter::operator()(std::uint32_t u, std::uint32_t v)
{
    ++degree_[u];
    ++degree_[v];
    ++edges_;
    if (!track_components_) {
        return;
    }
    std::uint32_t a = find(u);
    std::uint32_t b = find(v);
    if (a == b) {
        return;
    }
    if (size_[a] < size_[b]) {
        std::swap(a, b);
    }
    parent_[b] = a;
    size_[a] += size_[b];
}

DegreeHistogram StreamingCounter::degrees() const
{
    DegreeHistogram h;
    h.vertex_total = degree_.size();
    for (std::uint32_t d : degree_) {
        ++h.counts[d];
    }
    return h;
}

ComponentSummary StreamingCounter::components()
{
    if (!track_components_) {
        throw DomainError("component tracking was disabled for this counter");
    }
    ComponentSummary summary;
    for (std::uint32_t v = 0; v < parent_.size(); ++v) {
        if (find(v) == v) {
            ++summary.counts[size_[v]];
            ++summary.component_total;
        }
    }
    return summary;
}

ComponentSummary component_counts(const Graph& g)
{
    StreamingCounter counter(g.vertex_count());
    for (const Edge& e : g.edges()) {
        counter(e.u, e.v);
    }
    return counter.components();
}

namespace {

// ESU enumeration (Wernicke): every connected k-set is generated exactly once
// from its smallest vertex.
class InducedCounter {
public:
    InducedCounter(const Graph& g, std::size_t k) : g_(g), k_(k) {}

    std::uint64_t run()
    {
        for (std::uint32_t v = 0; v < g_.vertex_count(); ++v) {
            anchor_ = v;
            members_.assign(1, v);
            std::vector<std::uint32_t> extension;
            for (std::uint32_t u : g_.neighbors(v)) {
                if (u > v) {
                    extension.push_back(u);
                }
            }
            extend(extension);
        }
        return count_;
    }

private:
    bool in_closed_neighborhood(std::uint32_t u) const
    {
        for (std::uint32_t m : members_) {
            if (m == u || g_.has_edge(m, u)) {
                return true;
            }
        }
        return false;
    }

    void extend(std::vector<std::uint32_t> extension)
    {
        if (members_.size() + 1 == k_) {
            // Each remaining candidate completes a distinct k-set.
            count_ += extension.size();
            return;
        }
        while (!extension.empty()) {
            const std::uint32_t w = extension.back();
            extension.pop_back();
            std::vector<std::uint32_t> next = extension;
            for (std::uint32_t u : g_.neighbors(w)) {
                if (u > anchor_ && !in_closed_neighborhood(u) &&
                    std::find(next.begin(), next.end(), u) == next.end()) {
                    next.push_back(u);
                }
            }
            members_.push_back(w);
            extend(std::move(next));
            members_.pop_back();
        }
    }

    const Graph& g_;
    std::size_t k_;
    std::uint32_t anchor_ = 0;
    std::vector<std::uint32_t> members_;
    std::uint64_t count_ = 0;
};

} // namespace

std::uint64_t connected_induced_count(const Graph& g, std::size_t k)
{
    if (k < 2) {
        throw DomainError("connected_induced_count needs k >= 2");
    }
    if (k > kMaxInducedOrder) {
        throw CapabilityError("exact H_k counting supports k <= " +
                              std::to_string(kMaxInducedOrder) + ", got k = " + std::to_string(k));
    }
    if (k == 2) {
        return g.edge_count();
    }
    return InducedCounter(g, k).run();
}

} // namespace irg
