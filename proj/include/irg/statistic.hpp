#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace irg {

enum class StatisticKind { Degree, Component, ConnectedInduced };

// D_j, N_k or H_k; written "D0", "N1", "H2".
struct StatisticId {
    StatisticKind kind = StatisticKind::Degree;
    std::size_t index = 0;

    friend bool operator==(const StatisticId&, const StatisticId&) = default;
};

inline constexpr std::size_t kMaxDegreeIndex = 16;
inline constexpr std::size_t kMaxComponentOrder = 5;

// Throws ConfigError for malformed names or indices beyond the caps
// (j <= 16, 1 <= k <= 5, 2 <= k <= 5 for H).
StatisticId parse_statistic(std::string_view name);
std::string to_string(const StatisticId& id);

} // namespace irg
