#pragma once

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "miner/commit.hpp"
#include "miner/options.hpp"
#include "miner/time.hpp"

namespace miner {

/// Parses the commit-log dump format:
///
///   C|<id>|<author_name>|<author_email>|<author ISO-8601>|<committer ISO-8601>|<parent_count>
///   M|<base64 of commit message>
///   <added>\t<deleted>\t<path>      (zero or more numstat lines, "-" = unknown)
///   <blank line>
///
/// Records appear in stream order. Throws ParseError with the offending line
/// number on malformed or truncated input.
std::vector<CommitRecord> parse_commit_log(std::istream& in);
std::vector<CommitRecord> parse_commit_log(std::string_view text);

/// Inverse of parse_commit_log; parse(serialize(x)) == x.
std::string serialize_commit_log(const std::vector<CommitRecord>& commits);

/// Keeps the non-merge commits (parent_count <= 1) whose selected timestamp
/// lies inside the window. Preserves input order; idempotent.
std::vector<CommitRecord> filter_commits(const std::vector<CommitRecord>& commits,
                                         const TimeWindow& w,
                                         TimestampSource source = TimestampSource::author);

/// Distinct issue numbers referenced in a commit message as "#123" tokens.
/// A token counts when '#' is immediately followed by decimal digits and not
/// preceded by an alphanumeric character (so "color0#fff" embeds are skipped).
/// Leading zeros parse as decimal; zero itself is not an issue number.
/// In keyword mode only tokens preceded by a closing keyword (fix/fixes/fixed,
/// close/closes/closed, resolve/resolves/resolved, optionally followed by the
/// word "issue") are kept.
std::set<std::uint64_t> extract_issue_refs(std::string_view message,
                                           RefsMode mode = RefsMode::any);

/// The shell pipeline that produces the dump format from a local clone;
/// printed by `cohort-miner dump-cmd` and documented in the README.
std::string dump_command_line(std::string_view repo_path);

/// Runs the dump pipeline against a local clone and parses the result.
/// Requires `git` on PATH; throws IoError if the subprocess fails.
std::vector<CommitRecord> read_repository_log(const std::string& repo_path);

/// Converts the raw sentinel-delimited `git log` stream (as produced by the
/// pretty template inside dump_command_line) into the canonical dump format.
/// Exposed for testing the dump pipeline without a live repository.
std::string sentinel_stream_to_dump(std::string_view raw);

}  // namespace miner
