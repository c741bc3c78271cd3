#include "irg/statistic.hpp"

#include <charconv>

#include "irg/error.hpp"

namespace irg {

StatisticId parse_statistic(std::string_view name)
{
    if (name.size() < 2) {
        throw ConfigError("malformed statistic '" + std::string(name) + "'");
    }
    StatisticId id;
    switch (name.front()) {
    case 'D': id.kind = StatisticKind::Degree; break;
    case 'N': id.kind = StatisticKind::Component; break;
    case 'H': id.kind = StatisticKind::ConnectedInduced; break;
    default: throw ConfigError("unknown statistic '" + std::string(name) + "' (expected D<j>, N<k> or H<k>)");
    }
    const auto digits = name.substr(1);
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id.index);
    if (ec != std::errc{} || end != digits.data() + digits.size()) {
        throw ConfigError("malformed statistic index in '" + std::string(name) + "'");
    }
    switch (id.kind) {
    case StatisticKind::Degree:
        if (id.index > kMaxDegreeIndex) {
            throw ConfigError("degree statistics are capped at j <= 16, got '" + std::string(name) + "'");
        }
        break;
    case StatisticKind::Component:
        if (id.index < 1 || id.index > kMaxComponentOrder) {
            throw ConfigError("component statistics need 1 <= k <= 5, got '" + std::string(name) + "'");
        }
        break;
    case StatisticKind::ConnectedInduced:
        if (id.index < 2 || id.index > kMaxComponentOrder) {
            throw ConfigError("H statistics need 2 <= k <= 5, got '" + std::string(name) + "'");
        }
        break;
    }
    return id;
}

std::string to_string(const StatisticId& id)
{
    const char prefix = id.kind == StatisticKind::Degree      ? 'D'
                        : id.kind == StatisticKind::Component ? 'N'
                                                              : 'H';
    return std::string(1, prefix) + std::to_string(id.index);
}

} // namespace irg
