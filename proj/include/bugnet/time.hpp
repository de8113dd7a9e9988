#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace bugnet {

/// Instants are whole seconds since the Unix epoch, UTC.
using Instant = std::int64_t;

inline constexpr std::int64_t kSecondsPerDay = 86400;

/// Parses a strict ISO 8601 UTC timestamp of the form
/// "2003-10-05T12:00:00Z". Returns nullopt on any format or range error.
std::optional<Instant> parse_instant(std::string_view iso);

/// Formats an instant as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_instant(Instant t);

/// Half-open interval [start, end).
struct TimeInterval {
    Instant start = 0;
    Instant end = 0;

    bool contains(Instant t) const { return t >= start && t < end; }
    bool operator==(const TimeInterval&) const = default;
};

/// Window of `length_days` days ending just before t: [t - length_days d, t).
/// The anchor instant t itself is excluded.
TimeInterval preceding_window(Instant t, int length_days = 30);

/// Window of `length_days` days starting just after t. The underlying set is
/// (t, t + length_days d]; with whole-second instants this equals the
/// half-open interval [t + 1, t + length_days d + 1), which is what is
/// returned. The anchor instant t itself is excluded.
TimeInterval following_window(Instant t, int length_days = 30);

}  // namespace bugnet
