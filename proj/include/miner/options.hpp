#pragma once

namespace miner {

/// Which commit timestamp drives window filtering and the last-minute
/// classification. Author time reflects when the work was written.
enum class TimestampSource { author, committer };

/// How commit messages are scanned for issue references.
enum class RefsMode {
    any,      ///< every "#123" token counts
    keyword,  ///< only "#123" preceded by a closing keyword (fixes, closes, ...)
};

/// How the touched-files statistic counts a file edited in several commits.
enum class TouchedFilesMode {
    per_commit,  ///< sum of per-commit file counts
    distinct,    ///< distinct paths per repository
};

/// How a cohort's projects combine into one metrics row.
enum class AggregateMode {
    pool,              ///< pool all commits/issues, divide once by the union of contributors
    mean_of_projects,  ///< compute per-project metrics, then average their values
};

/// Every metric ambiguity is a named switch so that one config file fully
/// describes a comparison run.
struct AnalysisOptions {
    TimestampSource timestamp_source = TimestampSource::author;
    RefsMode refs = RefsMode::any;
    TouchedFilesMode touched_files = TouchedFilesMode::per_commit;
    bool normalize_line_changes = false;
    AggregateMode aggregate = AggregateMode::pool;
    bool strict_window_events = false;
};

}  // namespace miner
