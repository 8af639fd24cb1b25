#pragma once

// Serial reference implementations written directly from the metric
// definitions, kept deliberately independent of the optimized kernels in the
// main library: different reference-extraction logic, two-pass variance,
// independent UTF-8 decoding. Tests compare the production path against
// these; the benchmark tool measures the speedup over them.

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "miner/commit.hpp"
#include "miner/issue.hpp"
#include "miner/metrics.hpp"
#include "miner/options.hpp"
#include "miner/survey.hpp"
#include "miner/time.hpp"

namespace miner::reference {

std::set<std::uint64_t> naive_issue_refs(const std::string& message, RefsMode mode);

CommitMetrics naive_commit_metrics(const std::vector<CommitRecord>& commits,
                                   Timestamp project_end, Duration last_minute_threshold,
                                   std::uint64_t n, const AnalysisOptions& options = {});

/// `canonical_of` maps a tracker login to its canonical contributor id.
IssueMetrics naive_issue_metrics(const std::vector<IssueRecord>& issues,
                                 const std::function<std::string(const std::string&)>& canonical_of,
                                 std::uint64_t n);

TextStats naive_issue_text_stats(const std::vector<IssueRecord>& issues);

LikertSummary naive_likert_summary(std::vector<int> values, double trim_fraction);

/// Linear-interpolation quantile via the two-sided weighted form.
double naive_quantile(std::vector<double> values, double p);

std::uint64_t naive_scalar_count(const std::string& text);

}  // namespace miner::reference
