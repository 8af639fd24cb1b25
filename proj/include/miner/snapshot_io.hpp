#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "miner/issue.hpp"
#include "miner/time.hpp"

namespace miner {

/// Serializes a snapshot as the versioned JSON document (schema_version 1).
/// Deterministic: identical snapshots produce identical bytes.
std::string save_snapshot(const Snapshot& snapshot);

/// Parses and validates a snapshot document. Violations raise SchemaError
/// naming the offending path, e.g. "issues[3].closed_at".
Snapshot load_snapshot(std::string_view bytes);

Snapshot load_snapshot_file(const std::string& path);
void save_snapshot_file(const Snapshot& snapshot, const std::string& path);

/// The study selection: issues that are not pull requests and were closed
/// inside the window. Order-preserving; every selected issue has a closer.
std::vector<IssueRecord> select_study_issues(const Snapshot& snapshot, const TimeWindow& w);

/// Drops events and comments whose own timestamp lies outside the window
/// (the strict_window_events reading of the study selection).
std::vector<IssueRecord> restrict_events_to_window(std::vector<IssueRecord> issues,
                                                   const TimeWindow& w);

}  // namespace miner
