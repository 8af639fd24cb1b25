#pragma once

#include <string>
#include <vector>

#include "miner/config.hpp"
#include "miner/github_client.hpp"
#include "miner/identity.hpp"
#include "miner/metrics.hpp"

namespace miner {

/// Reads a project's commits. A regular file is parsed as a commit-log dump;
/// a directory is treated as a local clone and dumped via git. Remote
/// identifiers are only meaningful to `fetch`.
std::vector<CommitRecord> load_project_commits(const ProjectSpec& project,
                                               const RunConfig& config);

/// Loads the project's snapshot from <snapshot_dir>/<name>.snapshot.json.
Snapshot load_project_snapshot(const ProjectSpec& project, const RunConfig& config);

/// Window-filters one project's raw inputs into the pooling unit.
ProjectActivity build_activity(const ProjectSpec& project, std::vector<CommitRecord> commits,
                               const Snapshot& snapshot, const AnalysisOptions& options);

/// Loads, filters, and assembles one cohort (offline: dumps and snapshots
/// only).
CohortMetrics analyze_cohort(const CohortSpec& cohort, const RunConfig& config,
                             const AliasMap& aliases);

/// All cohorts in config order. Project inputs load in parallel; assembly is
/// sequential so output order is deterministic.
std::vector<CohortMetrics> analyze_all(const RunConfig& config, const AliasMap& aliases);

/// Fetches every project's tracker data and writes the snapshot files.
/// Returns the written paths.
std::vector<std::string> fetch_snapshots(const RunConfig& config, TrackerClient& client);

AliasMap load_configured_aliases(const RunConfig& config);

}  // namespace miner
