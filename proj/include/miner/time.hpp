#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace miner {

/// All timestamps are normalized to UTC at ingest; source offsets are applied
/// and then discarded. Second resolution.
using Timestamp = std::chrono::sys_seconds;
using Duration = std::chrono::seconds;

/// Parses an ISO-8601 date-time ("2018-01-31T00:00:00Z",
/// "2018-01-31T01:30:00+01:30", fractional seconds tolerated and truncated)
/// into a UTC timestamp. Throws ValidationError on malformed input.
Timestamp parse_iso8601_utc(std::string_view text);

/// Renders a timestamp as "YYYY-MM-DDTHH:MM:SSZ".
std::string format_iso8601_utc(Timestamp t);

/// Half-open UTC interval [start, end) selecting the commits and issue
/// closures under study.
class TimeWindow {
public:
    /// Throws ValidationError unless start < end.
    TimeWindow(Timestamp start, Timestamp end);

    Timestamp start() const { return start_; }
    Timestamp end() const { return end_; }
    Duration duration() const { return end_ - start_; }

    bool operator==(const TimeWindow&) const = default;

private:
    Timestamp start_;
    Timestamp end_;
};

/// Builds the window covering the last `days` full days before `end`:
/// [end - days*24h, end). Throws ValidationError for non-positive days.
TimeWindow window_from_project_end(Timestamp end, int days);

/// True iff start <= t < end.
bool window_contains(const TimeWindow& w, Timestamp t);

}  // namespace miner
