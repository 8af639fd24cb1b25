#include "miner/commit_log.hpp"

#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "miner/errors.hpp"
#include "miner/text.hpp"
#include "testutil.hpp"

namespace miner {
namespace {

using testutil::CommitBuilder;
using testutil::ts;

std::string dump_of(const std::vector<CommitRecord>& commits) {
    return serialize_commit_log(commits);
}

TEST(ParseCommitLog, SingleCommitWithNumstat) {
    const std::string dump =
        "C|aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:05:00Z|1\n"
        "M|" + base64_encode("fixed issue #123") + "\n"
        "3\t1\ta.txt\n"
        "10\t0\tb.txt\n"
        "\n";
    const auto commits = parse_commit_log(dump);
    ASSERT_EQ(commits.size(), 1u);
    const CommitRecord& c = commits[0];
    EXPECT_EQ(c.author_name, "Ada");
    EXPECT_EQ(c.message, "fixed issue #123");
    EXPECT_EQ(c.parent_count, 1u);
    ASSERT_EQ(c.file_deltas.size(), 2u);
    std::uint64_t added = 0;
    for (const FileDelta& d : c.file_deltas) added += d.lines_added.value_or(0);
    EXPECT_EQ(added, 13u);  // 3 + 10, totals by hand
}

TEST(ParseCommitLog, EmptyStreamYieldsEmptyList) {
    EXPECT_TRUE(parse_commit_log(std::string_view{}).empty());
    EXPECT_TRUE(parse_commit_log("\n\n").empty());
}

TEST(ParseCommitLog, BinaryDeltaMapsToUnknown) {
    const std::string dump =
        "C|bbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbbb|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|" + base64_encode("add image") + "\n"
        "-\t-\timg.png\n"
        "\n";
    const auto commits = parse_commit_log(dump);
    ASSERT_EQ(commits.size(), 1u);
    ASSERT_EQ(commits[0].file_deltas.size(), 1u);
    const FileDelta& d = commits[0].file_deltas[0];
    EXPECT_EQ(d.path, "img.png");
    EXPECT_FALSE(d.lines_added.has_value());
    EXPECT_FALSE(d.lines_deleted.has_value());
}

TEST(ParseCommitLog, MalformedHeaderCarriesLineNumber) {
    const std::string dump =
        "C|aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|" + base64_encode("ok") + "\n"
        "\n"
        "C|tooshort|Ada|ada@uni.example|2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n";
    try {
        parse_commit_log(dump);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(ParseCommitLog, TruncatedRecordAtEofFails) {
    const std::string dump =
        "C|aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n";
    EXPECT_THROW(parse_commit_log(dump), ParseError);
}

TEST(ParseCommitLog, RejectsBadBase64) {
    const std::string dump =
        "C|aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|@@not-base64@@\n\n";
    EXPECT_THROW(parse_commit_log(dump), ParseError);
}

TEST(ParseCommitLog, RejectsUppercaseCommitId) {
    const std::string dump =
        "C|AAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAAA|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|" + base64_encode("x") + "\n\n";
    EXPECT_THROW(parse_commit_log(dump), ParseError);
}

TEST(ParseCommitLog, RejectsDuplicatePathInOneRecord) {
    const std::string dump =
        "C|cccccccccccccccccccccccccccccccccccccccc|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|" + base64_encode("x") + "\n"
        "1\t1\tsame.txt\n"
        "2\t2\tsame.txt\n"
        "\n";
    EXPECT_THROW(parse_commit_log(dump), ParseError);
}

TEST(ParseCommitLog, MissingBlankSeparatorIsAnError) {
    const std::string dump =
        "C|cccccccccccccccccccccccccccccccccccccccc|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n"
        "M|" + base64_encode("x") + "\n"
        "C|dddddddddddddddddddddddddddddddddddddddd|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|1\n";
    EXPECT_THROW(parse_commit_log(dump), ParseError);
}

TEST(ParseCommitLog, AuthorNameMayContainPipes) {
    CommitRecord original = CommitBuilder(1).author("we|rd|name", "w@x.de").message("m");
    const auto parsed = parse_commit_log(dump_of({original}));
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0].author_name, "we|rd|name");
}

TEST(ParseCommitLog, QuotedPathsRoundTrip) {
    CommitRecord original = CommitBuilder(2).message("m").file("dir/tab\tname.txt", 1, 2);
    const auto parsed = parse_commit_log(dump_of({original}));
    ASSERT_EQ(parsed.size(), 1u);
    EXPECT_EQ(parsed[0].file_deltas[0].path, "dir/tab\tname.txt");
}

TEST(ParseCommitLog, RoundTripPreservesRecords) {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 200; ++round) {
        std::vector<CommitRecord> commits;
        const unsigned count = rng() % 8;
        for (unsigned i = 0; i < count; ++i) {
            CommitRecord c = testutil::random_commit(rng, ts("2024-01-24T00:00:00Z"),
                                                     std::chrono::hours{7 * 24}, 4);
            c.parent_count = rng() % 3;
            commits.push_back(std::move(c));
        }
        const auto parsed = parse_commit_log(dump_of(commits));
        EXPECT_EQ(parsed, commits);
    }
}

TEST(FilterCommits, ExcludesMergesInsideWindow) {
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    const CommitRecord merge = CommitBuilder(1).at("2024-01-26T10:00:00Z").parents(2);
    EXPECT_TRUE(filter_commits({merge}, w).empty());
}

TEST(FilterCommits, EmptyInputEmptyOutput) {
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    EXPECT_TRUE(filter_commits({}, w).empty());
}

TEST(FilterCommits, KeepsOnlyInWindowNonMerges) {
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    const CommitRecord keep = CommitBuilder(1).at("2024-01-26T10:00:00Z");
    const CommitRecord outside = CommitBuilder(2).at("2024-01-10T10:00:00Z");
    const CommitRecord merge = CommitBuilder(3).at("2024-01-26T11:00:00Z").parents(2);
    const auto kept = filter_commits({keep, outside, merge}, w);
    ASSERT_EQ(kept.size(), 1u);
    EXPECT_EQ(kept[0].id, keep.id);
}

TEST(FilterCommits, RootCommitsSurvive) {
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    const CommitRecord root = CommitBuilder(1).at("2024-01-26T10:00:00Z").parents(0);
    EXPECT_EQ(filter_commits({root}, w).size(), 1u);
}

TEST(FilterCommits, TimestampSourceSwitch) {
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    // authored inside the window, committed after project end
    const CommitRecord c =
        CommitBuilder(1).at("2024-01-30T23:30:00Z").committed_at("2024-01-31T00:05:00Z");
    EXPECT_EQ(filter_commits({c}, w, TimestampSource::author).size(), 1u);
    EXPECT_TRUE(filter_commits({c}, w, TimestampSource::committer).empty());
}

TEST(FilterCommits, IdempotentAndSubset) {
    std::mt19937_64 rng(7);
    const TimeWindow w = window_from_project_end(ts("2024-01-31T00:00:00Z"), 7);
    for (int round = 0; round < 100; ++round) {
        std::vector<CommitRecord> commits;
        const unsigned count = rng() % 20;
        for (unsigned i = 0; i < count; ++i) {
            CommitRecord c = testutil::random_commit(rng, ts("2024-01-20T00:00:00Z"),
                                                     std::chrono::hours{14 * 24}, 4);
            c.parent_count = rng() % 3;
            commits.push_back(std::move(c));
        }
        const auto once = filter_commits(commits, w);
        const auto twice = filter_commits(once, w);
        EXPECT_EQ(once, twice);
        for (const CommitRecord& c : once) {
            EXPECT_LE(c.parent_count, 1u);
            EXPECT_NE(std::find(commits.begin(), commits.end(), c), commits.end());
        }
    }
}

TEST(ExtractIssueRefs, PaperExample) {
    EXPECT_EQ(extract_issue_refs("fixed issue #123"), (std::set<std::uint64_t>{123}));
}

TEST(ExtractIssueRefs, EmptyMessage) {
    EXPECT_TRUE(extract_issue_refs("").empty());
}

TEST(ExtractIssueRefs, DeduplicatesAndSkipsEmbeddedTokens) {
    EXPECT_EQ(extract_issue_refs("closes #7, relates to #7 and #10; color0#fff"),
              (std::set<std::uint64_t>{7, 10}));
}

TEST(ExtractIssueRefs, LeadingZerosParseAsDecimal) {
    EXPECT_EQ(extract_issue_refs("see #007"), (std::set<std::uint64_t>{7}));
    EXPECT_TRUE(extract_issue_refs("see #000").empty());  // zero is not an issue number
}

TEST(ExtractIssueRefs, HashWithoutDigitsIgnored) {
    EXPECT_TRUE(extract_issue_refs("#fff # #x9").empty());
}

TEST(ExtractIssueRefs, KeywordModeRequiresClosingKeyword) {
    EXPECT_EQ(extract_issue_refs("fixed issue #123", RefsMode::keyword),
              (std::set<std::uint64_t>{123}));
    EXPECT_EQ(extract_issue_refs("Closes #7 but relates to #10", RefsMode::keyword),
              (std::set<std::uint64_t>{7}));
    EXPECT_EQ(extract_issue_refs("resolve: #4", RefsMode::keyword), (std::set<std::uint64_t>{4}));
    EXPECT_TRUE(extract_issue_refs("see #12", RefsMode::keyword).empty());
    EXPECT_TRUE(extract_issue_refs("prefixed #3", RefsMode::keyword).empty());
}

TEST(ExtractIssueRefs, OrderInsensitive) {
    EXPECT_EQ(extract_issue_refs("#2 then #9 then #2"), extract_issue_refs("#9 #2 #9"));
}

TEST(SentinelStream, ConvertsToDumpFormat) {
    const std::string raw =
        "\x01""aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00+01:00|2024-01-25T12:00:00+01:00|p1 p2\x02msg\nbody\x03\n\n"
        "3\t1\ta.txt\n\n";
    const std::string dump = sentinel_stream_to_dump(raw);
    const auto commits = parse_commit_log(dump);
    ASSERT_EQ(commits.size(), 1u);
    EXPECT_EQ(commits[0].parent_count, 2u);
    EXPECT_EQ(commits[0].message, "msg\nbody");
    EXPECT_EQ(commits[0].author_time, ts("2024-01-25T11:00:00Z"));
    ASSERT_EQ(commits[0].file_deltas.size(), 1u);
}

TEST(SentinelStream, TruncatedStreamsFail) {
    EXPECT_THROW(sentinel_stream_to_dump("\x01header-without-message-mark"), ValidationError);
    EXPECT_THROW(sentinel_stream_to_dump("\x01h|a|e|t|t|\x02message never ends"), ValidationError);
    EXPECT_TRUE(sentinel_stream_to_dump("").empty());
}

TEST(SentinelStream, RootCommitHasZeroParents) {
    const std::string raw =
        "\x01""aaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaaa|Ada|ada@uni.example|"
        "2024-01-25T12:00:00Z|2024-01-25T12:00:00Z|\x02root\x03\n";
    const auto commits = parse_commit_log(sentinel_stream_to_dump(raw));
    ASSERT_EQ(commits.size(), 1u);
    EXPECT_EQ(commits[0].parent_count, 0u);
}

TEST(Utf8, ScalarCountsAndSanitize) {
    EXPECT_EQ(utf8_scalar_count(""), 0u);
    EXPECT_EQ(utf8_scalar_count("abc"), 3u);
    EXPECT_EQ(utf8_scalar_count("ä€"), 2u);        // 2-byte + 3-byte
    EXPECT_EQ(utf8_scalar_count("\U0001F600"), 1u);          // 4-byte emoji
    EXPECT_EQ(utf8_scalar_count("a\xFF" "b"), 3u);           // stray byte counts once
    EXPECT_EQ(utf8_sanitize("a\xFF" "b"), "a\xEF\xBF\xBD" "b");
    EXPECT_EQ(utf8_sanitize("okä"), "okä");
}

TEST(Base64, EncodeDecodeRoundTrip) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 300; ++i) {
        std::string data;
        const unsigned len = rng() % 80;
        for (unsigned k = 0; k < len; ++k) data += static_cast<char>(rng() % 256);
        const auto decoded = base64_decode(base64_encode(data));
        ASSERT_TRUE(decoded.has_value());
        EXPECT_EQ(*decoded, data);
    }
    EXPECT_FALSE(base64_decode("a").has_value());
    EXPECT_FALSE(base64_decode("ab=c").has_value());
    EXPECT_FALSE(base64_decode("!!!!").has_value());
}

}  // namespace
}  // namespace miner
