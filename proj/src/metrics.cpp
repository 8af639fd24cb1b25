#include "miner/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>

#include "miner/commit_log.hpp"
#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

// Below this size the parallel regions are not worth their setup cost.
constexpr std::int64_t kParallelGrain = 2048;

void require_contributors(std::uint64_t n) {
    if (n == 0)
        throw ValidationError("metrics need a positive contributor count; "
                              "resolve identities before computing metrics");
}

}  // namespace

CommitTotals commit_totals(const std::vector<CommitRecord>& commits, Timestamp project_end,
                           Duration last_minute_threshold, const AnalysisOptions& options) {
    const auto count = static_cast<std::int64_t>(commits.size());
    const Timestamp cutoff = project_end - last_minute_threshold;

    std::uint64_t files = 0, last_minute = 0, line_changes = 0;
    std::set<std::uint64_t> refs;
    std::set<std::string> distinct_paths;
    const bool want_distinct = options.touched_files == TouchedFilesMode::distinct;

#pragma omp parallel if (count > kParallelGrain)
    {
        std::set<std::uint64_t> local_refs;
        std::set<std::string> local_paths;

#pragma omp for reduction(+ : files, last_minute, line_changes) schedule(static) nowait
        for (std::int64_t i = 0; i < count; ++i) {
            const CommitRecord& c = commits[i];
            files += c.file_deltas.size();
            const Timestamp t = options.timestamp_source == TimestampSource::author
                                    ? c.author_time
                                    : c.committer_time;
            if (t > cutoff) ++last_minute;
            for (const FileDelta& d : c.file_deltas) {
                if (d.lines_added) line_changes += *d.lines_added;
                if (d.lines_deleted) line_changes += *d.lines_deleted;
                if (want_distinct) local_paths.insert(d.path);
            }
            local_refs.merge(extract_issue_refs(c.message, options.refs));
        }

#pragma omp critical
        {
            refs.merge(local_refs);
            if (want_distinct) distinct_paths.merge(local_paths);
        }
    }

    CommitTotals totals;
    totals.commits = commits.size();
    totals.touched_files = want_distinct ? distinct_paths.size() : files;
    totals.last_minute = last_minute;
    totals.line_changes = line_changes;
    totals.unique_refs = refs.size();
    return totals;
}

IssueTotals issue_totals(const std::vector<IssueRecord>& issues,
                         const ContributorSet& identities) {
    // Validated serially; the parallel kernel below must not throw.
    for (const IssueRecord& issue : issues)
        if (!issue.closer)
            throw ValidationError("issue " + std::to_string(issue.number) +
                                  " reached issue_totals without a closer");

    const auto count = static_cast<std::int64_t>(issues.size());
    std::uint64_t events = 0, comments = 0, same = 0, unbound = 0;

#pragma omp parallel for reduction(+ : events, comments, same, unbound) schedule(static) \
    if (count > kParallelGrain)
    for (std::int64_t i = 0; i < count; ++i) {
        const IssueRecord& issue = issues[i];
        events += issue.events.size();
        comments += issue.comments.size();
        const std::string* opener = identities.find_id(RawActor::from_login(issue.opener));
        const std::string* closer = identities.find_id(RawActor::from_login(*issue.closer));
        if (!opener || !closer) {
            ++unbound;
        } else if (*opener == *closer) {
            ++same;
        }
    }
    if (unbound > 0)
        throw ValidationError("issue opener/closer outside the resolved contributor population");

    IssueTotals totals;
    totals.issues = issues.size();
    totals.events = events;
    totals.comments = comments;
    totals.same_open_close = same;
    return totals;
}

CommitMetrics commit_metrics_from_totals(const CommitTotals& totals, std::uint64_t n,
                                         const AnalysisOptions& options) {
    require_contributors(n);
    CommitMetrics m;
    const double dn = static_cast<double>(n);
    m.commit_amount = static_cast<double>(totals.commits) / dn;
    m.touched_files = static_cast<double>(totals.touched_files) / dn;
    m.last_minute_commits = static_cast<double>(totals.last_minute) / dn;
    m.line_changes_per_commit =
        totals.commits == 0
            ? 0.0
            : static_cast<double>(totals.line_changes) / static_cast<double>(totals.commits);
    if (options.normalize_line_changes) m.line_changes_per_commit /= dn;
    m.unique_issues_referenced = static_cast<double>(totals.unique_refs) / dn;
    return m;
}

IssueMetrics issue_metrics_from_totals(const IssueTotals& totals, std::uint64_t n) {
    require_contributors(n);
    IssueMetrics m;
    const double dn = static_cast<double>(n);
    m.issue_amount = static_cast<double>(totals.issues) / dn;
    m.issue_events = static_cast<double>(totals.events) / dn;
    m.issue_comments = static_cast<double>(totals.comments) / dn;
    m.pct_same_open_close =
        totals.issues == 0 ? 0.0
                           : 100.0 * static_cast<double>(totals.same_open_close) /
                                 static_cast<double>(totals.issues);
    return m;
}

CommitMetrics commit_metrics(const std::vector<CommitRecord>& commits, Timestamp project_end,
                             Duration last_minute_threshold, std::uint64_t n,
                             const AnalysisOptions& options) {
    require_contributors(n);
    return commit_metrics_from_totals(
        commit_totals(commits, project_end, last_minute_threshold, options), n, options);
}

IssueMetrics issue_metrics(const std::vector<IssueRecord>& issues,
                           const ContributorSet& identities, std::uint64_t n) {
    require_contributors(n);
    return issue_metrics_from_totals(issue_totals(issues, identities), n);
}

namespace {

// Exact integer moments keep the result identical under any summation order,
// including the parallel one.
FieldStats stats_from_lengths(std::vector<std::uint64_t>& lengths) {
    FieldStats s;
    const std::size_t n = lengths.size();
    std::uint64_t sum = 0;
    unsigned __int128 sum_sq = 0;
    for (std::uint64_t v : lengths) {
        sum += v;
        sum_sq += static_cast<unsigned __int128>(v) * v;
    }
    s.mean = static_cast<double>(sum) / static_cast<double>(n);
    if (n > 1) {
        const long double ls = static_cast<long double>(sum);
        const long double centered =
            static_cast<long double>(sum_sq) - ls * ls / static_cast<long double>(n);
        const long double variance = centered / static_cast<long double>(n - 1);
        s.stdev = variance > 0 ? static_cast<double>(sqrtl(variance)) : 0.0;
    }
    std::sort(lengths.begin(), lengths.end());
    if (n % 2 == 1)
        s.median = static_cast<double>(lengths[n / 2]);
    else
        s.median = (static_cast<double>(lengths[n / 2 - 1]) +
                    static_cast<double>(lengths[n / 2])) /
                   2.0;
    return s;
}

}  // namespace

TextStats issue_text_stats(const std::vector<IssueRecord>& issues) {
    if (issues.empty())
        throw EmptySampleError("issue text statistics need at least one selected issue");

    const auto count = static_cast<std::int64_t>(issues.size());
    std::vector<std::uint64_t> body_lengths(issues.size());
    std::vector<std::uint64_t> title_lengths(issues.size());

#pragma omp parallel for schedule(static) if (count > kParallelGrain)
    for (std::int64_t i = 0; i < count; ++i) {
        body_lengths[i] = utf8_scalar_count(issues[i].body);
        title_lengths[i] = utf8_scalar_count(issues[i].title);
    }

    TextStats stats;
    stats.body = stats_from_lengths(body_lengths);
    stats.title = stats_from_lengths(title_lengths);
    return stats;
}

namespace {

TimeWindow window_hull(const std::vector<ProjectActivity>& projects) {
    Timestamp start = projects.front().window.start();
    Timestamp end = projects.front().window.end();
    for (const ProjectActivity& p : projects) {
        start = std::min(start, p.window.start());
        end = std::max(end, p.window.end());
    }
    return TimeWindow(start, end);
}

std::vector<CommitRecord> drop_excluded_authors(const std::vector<CommitRecord>& commits,
                                                const ContributorSet& identities) {
    std::vector<CommitRecord> kept;
    kept.reserve(commits.size());
    for (const CommitRecord& c : commits)
        if (!identities.is_excluded(identities.id_for(RawActor::from_commit(c))))
            kept.push_back(c);
    return kept;
}

CohortMetrics assemble_pooled(const CohortSpec& cohort,
                              const std::vector<ProjectActivity>& projects,
                              const AliasMap& aliases, const AnalysisOptions& options) {
    std::vector<RawActor> actors;
    for (const ProjectActivity& p : projects) {
        auto project_actors = collect_actors(p.commits, p.issues);
        actors.insert(actors.end(), project_actors.begin(), project_actors.end());
    }
    const ContributorSet identities = resolve(actors, aliases);

    std::uint64_t n = 0;
    {
        std::set<std::string> active;
        for (const RawActor& a : actors) {
            const std::string& id = identities.id_for(a);
            if (!identities.is_excluded(id)) active.insert(id);
        }
        if (active.empty())
            throw EmptyWindowError("cohort \"" + cohort.label +
                                   "\": no contributor was active in the study window");
        n = active.size();
    }

    CommitTotals commit_sum;
    IssueTotals issue_sum;
    std::vector<IssueRecord> pooled_issues;
    for (const ProjectActivity& p : projects) {
        const auto commits = drop_excluded_authors(p.commits, identities);
        const CommitTotals ct =
            commit_totals(commits, p.window.end(), p.last_minute_threshold, options);
        commit_sum.commits += ct.commits;
        commit_sum.touched_files += ct.touched_files;
        commit_sum.last_minute += ct.last_minute;
        commit_sum.line_changes += ct.line_changes;
        commit_sum.unique_refs += ct.unique_refs;

        const IssueTotals it = issue_totals(p.issues, identities);
        issue_sum.issues += it.issues;
        issue_sum.events += it.events;
        issue_sum.comments += it.comments;
        issue_sum.same_open_close += it.same_open_close;

        pooled_issues.insert(pooled_issues.end(), p.issues.begin(), p.issues.end());
    }

    CohortMetrics result{cohort.label, window_hull(projects), n,
                         commit_metrics_from_totals(commit_sum, n, options),
                         issue_metrics_from_totals(issue_sum, n),
                         std::nullopt,
                         cohort.kanban_flag,
                         {}};
    result.provenance.commits_empty = commit_sum.commits == 0;
    result.provenance.issues_empty = issue_sum.issues == 0;
    if (!pooled_issues.empty()) result.text = issue_text_stats(pooled_issues);
    return result;
}

CohortMetrics assemble_mean_of_projects(const CohortSpec& cohort,
                                        const std::vector<ProjectActivity>& projects,
                                        const AliasMap& aliases,
                                        const AnalysisOptions& options) {
    // Every project is analyzed under its own contributor denominator, then
    // the per-project metric values are averaged unweighted. Projects with an
    // empty selection are skipped for the metrics that are undefined there.
    CommitMetrics commit_acc;
    IssueMetrics issue_acc;
    TextStats text_acc;
    std::size_t commit_defined = 0, issue_defined = 0, text_defined = 0;
    std::set<std::string> union_contributors;

    for (const ProjectActivity& p : projects) {
        const auto actors = collect_actors(p.commits, p.issues);
        const ContributorSet identities = resolve(actors, aliases);
        std::set<std::string> active;
        for (const RawActor& a : actors) {
            const std::string& id = identities.id_for(a);
            if (!identities.is_excluded(id)) active.insert(id);
        }
        if (active.empty())
            throw EmptyWindowError("project \"" + p.project_name +
                                   "\": no contributor was active in the study window");
        union_contributors.insert(active.begin(), active.end());
        const std::uint64_t n = active.size();

        const auto commits = drop_excluded_authors(p.commits, identities);
        const CommitTotals ct =
            commit_totals(commits, p.window.end(), p.last_minute_threshold, options);
        const CommitMetrics cm = commit_metrics_from_totals(ct, n, options);
        commit_acc.commit_amount += cm.commit_amount;
        commit_acc.touched_files += cm.touched_files;
        commit_acc.last_minute_commits += cm.last_minute_commits;
        commit_acc.unique_issues_referenced += cm.unique_issues_referenced;
        if (ct.commits > 0) {
            commit_acc.line_changes_per_commit += cm.line_changes_per_commit;
            ++commit_defined;
        }

        const IssueTotals it = issue_totals(p.issues, identities);
        const IssueMetrics im = issue_metrics_from_totals(it, n);
        issue_acc.issue_amount += im.issue_amount;
        issue_acc.issue_events += im.issue_events;
        issue_acc.issue_comments += im.issue_comments;
        if (it.issues > 0) {
            issue_acc.pct_same_open_close += im.pct_same_open_close;
            ++issue_defined;
            const TextStats ts = issue_text_stats(p.issues);
            text_acc.body.mean += ts.body.mean;
            text_acc.body.stdev += ts.body.stdev;
            text_acc.body.median += ts.body.median;
            text_acc.title.mean += ts.title.mean;
            text_acc.title.stdev += ts.title.stdev;
            text_acc.title.median += ts.title.median;
            ++text_defined;
        }
    }

    const double k = static_cast<double>(projects.size());
    CohortMetrics result{cohort.label,
                         window_hull(projects),
                         union_contributors.size(),
                         CommitMetrics{commit_acc.commit_amount / k, commit_acc.touched_files / k,
                                       commit_acc.last_minute_commits / k,
                                       commit_defined == 0 ? 0.0
                                                           : commit_acc.line_changes_per_commit /
                                                                 static_cast<double>(commit_defined),
                                       commit_acc.unique_issues_referenced / k},
                         IssueMetrics{issue_acc.issue_amount / k, issue_acc.issue_events / k,
                                      issue_acc.issue_comments / k,
                                      issue_defined == 0 ? 0.0
                                                         : issue_acc.pct_same_open_close /
                                                               static_cast<double>(issue_defined)},
                         std::nullopt,
                         cohort.kanban_flag,
                         {}};
    result.provenance.commits_empty = commit_defined == 0;
    result.provenance.issues_empty = issue_defined == 0;
    if (text_defined > 0) {
        const double td = static_cast<double>(text_defined);
        result.text = TextStats{{text_acc.body.mean / td, text_acc.body.stdev / td,
                                 text_acc.body.median / td},
                                {text_acc.title.mean / td, text_acc.title.stdev / td,
                                 text_acc.title.median / td}};
    }
    return result;
}

}  // namespace

CohortMetrics assemble(const CohortSpec& cohort, const std::vector<ProjectActivity>& projects,
                       const AliasMap& aliases, const AnalysisOptions& options) {
    if (projects.empty())
        throw ValidationError("cohort \"" + cohort.label + "\" has no analyzable projects");
    return options.aggregate == AggregateMode::pool
               ? assemble_pooled(cohort, projects, aliases, options)
               : assemble_mean_of_projects(cohort, projects, aliases, options);
}

}  // namespace miner
