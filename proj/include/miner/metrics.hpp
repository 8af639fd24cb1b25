#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "miner/commit.hpp"
#include "miner/identity.hpp"
#include "miner/issue.hpp"
#include "miner/model.hpp"
#include "miner/options.hpp"
#include "miner/time.hpp"

namespace miner {

/// The five commit-attribute columns; all except line_changes_per_commit are
/// means per contributor.
struct CommitMetrics {
    double commit_amount = 0;
    double touched_files = 0;
    double last_minute_commits = 0;
    double line_changes_per_commit = 0;
    double unique_issues_referenced = 0;

    bool operator==(const CommitMetrics&) const = default;
};

/// The four issue-attribute columns; counts are means per contributor, the
/// last column a percentage in [0, 100].
struct IssueMetrics {
    double issue_amount = 0;
    double issue_events = 0;
    double issue_comments = 0;
    double pct_same_open_close = 0;

    bool operator==(const IssueMetrics&) const = default;
};

struct FieldStats {
    double mean = 0;
    double stdev = 0;   // sample (n-1); 0 for a single value
    double median = 0;  // midpoint of the two central order statistics

    bool operator==(const FieldStats&) const = default;
};

/// Issue body and title length statistics over Unicode scalar counts.
struct TextStats {
    FieldStats body;
    FieldStats title;

    bool operator==(const TextStats&) const = default;
};

/// Degenerate-input flags carried alongside the metrics so sparse cohorts
/// still render (with a footnote) instead of erroring.
struct MetricProvenance {
    bool commits_empty = false;  // line_changes_per_commit defined as 0
    bool issues_empty = false;   // pct defined as 0; text stats absent
};

/// One assembled comparison row: everything the three tables need.
struct CohortMetrics {
    std::string cohort_label;
    TimeWindow window;  // hull of the projects' study windows
    std::uint64_t contributor_count = 1;
    CommitMetrics commit;
    IssueMetrics issue;
    std::optional<TextStats> text;  // absent when no issue was selected
    bool kanban_flag = false;
    MetricProvenance provenance;
};

/// One project's window-filtered inputs, ready for pooling.
struct ProjectActivity {
    std::string project_name;
    TimeWindow window;
    Duration last_minute_threshold{};
    std::vector<CommitRecord> commits;  // non-merge, in-window
    std::vector<IssueRecord> issues;    // study selection
};

/// Raw integer totals behind CommitMetrics; pooled across a cohort before
/// normalization.
struct CommitTotals {
    std::uint64_t commits = 0;
    std::uint64_t touched_files = 0;
    std::uint64_t last_minute = 0;
    std::uint64_t line_changes = 0;  // known deltas only; binary files add 0
    std::uint64_t unique_refs = 0;   // distinct per repository
};

struct IssueTotals {
    std::uint64_t issues = 0;
    std::uint64_t events = 0;
    std::uint64_t comments = 0;
    std::uint64_t same_open_close = 0;
};

CommitTotals commit_totals(const std::vector<CommitRecord>& commits, Timestamp project_end,
                           Duration last_minute_threshold, const AnalysisOptions& options = {});

IssueTotals issue_totals(const std::vector<IssueRecord>& issues, const ContributorSet& identities);

CommitMetrics commit_metrics_from_totals(const CommitTotals& totals, std::uint64_t n,
                                         const AnalysisOptions& options = {});
IssueMetrics issue_metrics_from_totals(const IssueTotals& totals, std::uint64_t n);

/// Single-project commit metrics. Commits must already be window-filtered
/// and non-merge. Throws ValidationError when n == 0.
CommitMetrics commit_metrics(const std::vector<CommitRecord>& commits, Timestamp project_end,
                             Duration last_minute_threshold, std::uint64_t n,
                             const AnalysisOptions& options = {});

/// Single-project issue metrics over the study selection; every issue must
/// carry a closer. Throws ValidationError when n == 0.
IssueMetrics issue_metrics(const std::vector<IssueRecord>& issues,
                           const ContributorSet& identities, std::uint64_t n);

/// Mean, sample standard deviation, and median of issue body and title
/// lengths (Unicode scalars). Throws EmptySampleError on an empty selection.
TextStats issue_text_stats(const std::vector<IssueRecord>& issues);

/// Pools a cohort's projects (or averages per-project metrics, depending on
/// options.aggregate), resolves identities across the whole cohort, and
/// computes the three metric groups. Commits authored by excluded
/// contributors are dropped; issues are kept but excluded ids never count in
/// the denominator. Throws EmptyWindowError when nobody was active.
CohortMetrics assemble(const CohortSpec& cohort, const std::vector<ProjectActivity>& projects,
                       const AliasMap& aliases, const AnalysisOptions& options = {});

}  // namespace miner
