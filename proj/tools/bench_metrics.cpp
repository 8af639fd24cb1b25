// Benchmark comparing the parallel metric kernels against the serial
// reference implementations on synthetic data. Also cross-checks that both
// paths agree before trusting the timings.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "miner/metrics.hpp"
#include "reference/naive.hpp"

namespace {

using namespace miner;

constexpr char kHex[] = "0123456789abcdef";

std::vector<CommitRecord> synthetic_commits(std::size_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> files(1, 8);
    std::uniform_int_distribution<std::uint64_t> lines(0, 400);
    std::uniform_int_distribution<int> ref(1, 500);
    std::uniform_int_distribution<long> offset(0, 7 * 24 * 3600 - 1);

    const Timestamp end = parse_iso8601_utc("2024-01-31T00:00:00Z");
    std::vector<CommitRecord> commits(count);
    for (std::size_t i = 0; i < count; ++i) {
        CommitRecord& c = commits[i];
        c.id.resize(40);
        for (char& ch : c.id) ch = kHex[rng() % 16];
        c.author_name = "author" + std::to_string(rng() % 64);
        c.author_email = c.author_name + "@example.org";
        c.author_time = end - std::chrono::seconds{offset(rng) + 1};
        c.committer_time = c.author_time;
        c.message = "work on feature, fixes #" + std::to_string(ref(rng)) + " and touches #" +
                    std::to_string(ref(rng));
        const int nfiles = files(rng);
        for (int f = 0; f < nfiles; ++f)
            c.file_deltas.push_back(
                {"src/file" + std::to_string(rng() % 512) + "_" + std::to_string(f) + ".cpp",
                 lines(rng), lines(rng)});
    }
    return commits;
}

std::vector<IssueRecord> synthetic_issues(std::size_t count, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> body_words(0, 200);
    std::vector<IssueRecord> issues(count);
    for (std::size_t i = 0; i < count; ++i) {
        IssueRecord& issue = issues[i];
        issue.number = i + 1;
        issue.title = "Issue title number " + std::to_string(i);
        const int words = body_words(rng);
        for (int w = 0; w < words; ++w) issue.body += "wordä ";
        issue.opener = "user" + std::to_string(rng() % 32);
        issue.closer = "user" + std::to_string(rng() % 32);
        issue.opened_at = parse_iso8601_utc("2024-01-20T00:00:00Z");
        issue.closed_at = parse_iso8601_utc("2024-01-28T00:00:00Z");
    }
    return issues;
}

template <typename F>
double best_seconds(F&& body, int repetitions) {
    double best = 1e300;
    for (int i = 0; i < repetitions; ++i) {
        const auto start = std::chrono::steady_clock::now();
        body();
        const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
        best = std::min(best, elapsed.count());
    }
    return best;
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-9 * (1 + std::abs(a) + std::abs(b)); }

}  // namespace

int main(int argc, char** argv) {
    std::size_t commit_count = 200000;
    std::size_t issue_count = 50000;
    if (argc > 1) commit_count = std::stoull(argv[1]);
    if (argc > 2) issue_count = std::stoull(argv[2]);

    std::mt19937_64 rng(42);
    const auto commits = synthetic_commits(commit_count, rng);
    const auto issues = synthetic_issues(issue_count, rng);
    const Timestamp end = parse_iso8601_utc("2024-01-31T00:00:00Z");
    const Duration last_minute = std::chrono::hours{24};
    const std::uint64_t n = 20;
    const AnalysisOptions options;

    CommitMetrics parallel_commit;
    CommitMetrics serial_commit;
    const double commit_parallel_s = best_seconds(
        [&] { parallel_commit = commit_metrics(commits, end, last_minute, n, options); }, 5);
    const double commit_serial_s = best_seconds(
        [&] {
            serial_commit = reference::naive_commit_metrics(commits, end, last_minute, n, options);
        },
        5);

    TextStats parallel_text;
    TextStats serial_text;
    const double text_parallel_s = best_seconds([&] { parallel_text = issue_text_stats(issues); }, 5);
    const double text_serial_s =
        best_seconds([&] { serial_text = reference::naive_issue_text_stats(issues); }, 5);

    const bool commit_ok = close(parallel_commit.commit_amount, serial_commit.commit_amount) &&
                           close(parallel_commit.touched_files, serial_commit.touched_files) &&
                           close(parallel_commit.last_minute_commits,
                                 serial_commit.last_minute_commits) &&
                           close(parallel_commit.line_changes_per_commit,
                                 serial_commit.line_changes_per_commit) &&
                           close(parallel_commit.unique_issues_referenced,
                                 serial_commit.unique_issues_referenced);
    const bool text_ok = close(parallel_text.body.mean, serial_text.body.mean) &&
                         close(parallel_text.body.stdev, serial_text.body.stdev) &&
                         close(parallel_text.body.median, serial_text.body.median);

    std::printf("kernel            inputs      serial [s]   parallel [s]   speedup   agree\n");
    std::printf("commit metrics    %-10zu  %10.4f   %12.4f   %7.2fx   %s\n", commit_count,
                commit_serial_s, commit_parallel_s, commit_serial_s / commit_parallel_s,
                commit_ok ? "yes" : "NO");
    std::printf("issue text stats  %-10zu  %10.4f   %12.4f   %7.2fx   %s\n", issue_count,
                text_serial_s, text_parallel_s, text_serial_s / text_parallel_s,
                text_ok ? "yes" : "NO");
    return commit_ok && text_ok ? 0 : 1;
}
