#include "naive.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <regex>

namespace miner::reference {

std::uint64_t naive_scalar_count(const std::string& text) {
    // Decode one code point at a time; every decode failure consumes a single
    // byte and counts as one replacement character.
    std::uint64_t count = 0;
    std::size_t i = 0;
    const auto at = [&](std::size_t k) { return static_cast<unsigned char>(text[k]); };
    while (i < text.size()) {
        const unsigned char b = at(i);
        std::size_t len = 1;
        std::uint32_t cp = b;
        if (b >= 0xF0)
            len = 4, cp = b & 0x07;
        else if (b >= 0xE0)
            len = 3, cp = b & 0x0F;
        else if (b >= 0xC0)
            len = 2, cp = b & 0x1F;
        else if (b >= 0x80)
            len = 0;  // stray continuation byte
        bool ok = len > 0 && i + len <= text.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            if ((at(i + k) & 0xC0) != 0x80)
                ok = false;
            else
                cp = cp << 6 | (at(i + k) & 0x3F);
        }
        if (ok && len > 1) {
            const std::uint32_t minimum = len == 2 ? 0x80 : len == 3 ? 0x800 : 0x10000;
            if (cp < minimum || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) ok = false;
        }
        ++count;
        i += ok ? len : 1;
    }
    return count;
}

std::set<std::uint64_t> naive_issue_refs(const std::string& message, RefsMode mode) {
    static const std::regex keyword_tail(
        R"((fix(es|ed)?|close[sd]?|resolve[sd]?)(\s+issue)?\s*:?\s*$)",
        std::regex::icase);
    std::set<std::uint64_t> refs;
    for (std::size_t i = 0; i < message.size(); ++i) {
        if (message[i] != '#') continue;
        if (i > 0 && std::isalnum(static_cast<unsigned char>(message[i - 1])) &&
            static_cast<unsigned char>(message[i - 1]) < 0x80)
            continue;
        std::size_t end = i + 1;
        while (end < message.size() && std::isdigit(static_cast<unsigned char>(message[end])))
            ++end;
        if (end == i + 1) continue;
        const std::string digits = message.substr(i + 1, end - i - 1);
        if (digits.size() > 19) continue;
        errno = 0;
        const unsigned long long value = std::strtoull(digits.c_str(), nullptr, 10);
        if (errno != 0 || value == 0) continue;
        if (mode == RefsMode::keyword) {
            const std::string before = message.substr(0, i);
            if (!std::regex_search(before, keyword_tail)) continue;
        }
        refs.insert(value);
    }
    return refs;
}

CommitMetrics naive_commit_metrics(const std::vector<CommitRecord>& commits,
                                   Timestamp project_end, Duration last_minute_threshold,
                                   std::uint64_t n, const AnalysisOptions& options) {
    CommitMetrics m;
    const double dn = static_cast<double>(n);

    m.commit_amount = static_cast<double>(commits.size()) / dn;

    if (options.touched_files == TouchedFilesMode::per_commit) {
        double files = 0;
        for (const CommitRecord& c : commits) files += static_cast<double>(c.file_deltas.size());
        m.touched_files = files / dn;
    } else {
        std::set<std::string> paths;
        for (const CommitRecord& c : commits)
            for (const FileDelta& d : c.file_deltas) paths.insert(d.path);
        m.touched_files = static_cast<double>(paths.size()) / dn;
    }

    double last_minute = 0;
    for (const CommitRecord& c : commits) {
        const Timestamp t = options.timestamp_source == TimestampSource::author
                                ? c.author_time
                                : c.committer_time;
        if (project_end - t < last_minute_threshold) last_minute += 1;
    }
    m.last_minute_commits = last_minute / dn;

    double line_changes = 0;
    for (const CommitRecord& c : commits)
        for (const FileDelta& d : c.file_deltas) {
            if (d.lines_added) line_changes += static_cast<double>(*d.lines_added);
            if (d.lines_deleted) line_changes += static_cast<double>(*d.lines_deleted);
        }
    m.line_changes_per_commit =
        commits.empty() ? 0.0 : line_changes / static_cast<double>(commits.size());
    if (options.normalize_line_changes) m.line_changes_per_commit /= dn;

    std::set<std::uint64_t> refs;
    for (const CommitRecord& c : commits)
        for (std::uint64_t ref : naive_issue_refs(c.message, options.refs)) refs.insert(ref);
    m.unique_issues_referenced = static_cast<double>(refs.size()) / dn;
    return m;
}

IssueMetrics naive_issue_metrics(const std::vector<IssueRecord>& issues,
                                 const std::function<std::string(const std::string&)>& canonical_of,
                                 std::uint64_t n) {
    IssueMetrics m;
    const double dn = static_cast<double>(n);
    m.issue_amount = static_cast<double>(issues.size()) / dn;

    double events = 0, comments = 0, same = 0;
    for (const IssueRecord& issue : issues) {
        events += static_cast<double>(issue.events.size());
        comments += static_cast<double>(issue.comments.size());
        if (issue.closer && canonical_of(issue.opener) == canonical_of(*issue.closer)) same += 1;
    }
    m.issue_events = events / dn;
    m.issue_comments = comments / dn;
    m.pct_same_open_close =
        issues.empty() ? 0.0 : 100.0 * same / static_cast<double>(issues.size());
    return m;
}

namespace {

FieldStats naive_stats(std::vector<double> values) {
    FieldStats s;
    const std::size_t n = values.size();
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(n);
    if (n > 1) {
        double squares = 0;
        for (double v : values) squares += (v - s.mean) * (v - s.mean);
        s.stdev = std::sqrt(squares / static_cast<double>(n - 1));
    }
    std::sort(values.begin(), values.end());
    s.median = n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
    return s;
}

}  // namespace

TextStats naive_issue_text_stats(const std::vector<IssueRecord>& issues) {
    std::vector<double> bodies, titles;
    for (const IssueRecord& issue : issues) {
        bodies.push_back(static_cast<double>(naive_scalar_count(issue.body)));
        titles.push_back(static_cast<double>(naive_scalar_count(issue.title)));
    }
    return TextStats{naive_stats(std::move(bodies)), naive_stats(std::move(titles))};
}

LikertSummary naive_likert_summary(std::vector<int> values, double trim_fraction) {
    LikertSummary s;
    const std::size_t n = values.size();
    std::vector<double> as_doubles(values.begin(), values.end());
    const FieldStats base = naive_stats(as_doubles);
    s.mean = base.mean;
    s.stdev = base.stdev;
    s.median = base.median;

    std::sort(values.begin(), values.end());
    const auto k = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
    double trimmed = 0;
    for (std::size_t i = k; i < n - k; ++i) trimmed += values[i];
    s.trimmed_mean_10 = trimmed / static_cast<double>(n - 2 * k);
    s.range = static_cast<double>(values.back() - values.front());
    return s;
}

double naive_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const double position = p * static_cast<double>(n - 1);
    const auto lo = static_cast<std::size_t>(std::floor(position));
    const auto hi = static_cast<std::size_t>(std::ceil(position));
    if (lo == hi) return values[lo];
    return values[lo] * (static_cast<double>(hi) - position) +
           values[hi] * (position - static_cast<double>(lo));
}

}  // namespace miner::reference
