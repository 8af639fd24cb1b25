#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "miner/time.hpp"

namespace miner {

/// A non-comment tracker interaction (labeled, assigned, referenced, closed).
struct IssueEvent {
    std::string kind;                  // never "commented"
    std::optional<std::string> actor;  // absent for deleted accounts
    Timestamp at{};

    bool operator==(const IssueEvent&) const = default;
};

/// A comment; only its author, time, and length are retained.
struct IssueComment {
    std::string actor;
    Timestamp at{};
    std::uint64_t length_chars = 0;  // Unicode scalar count of the original body

    bool operator==(const IssueComment&) const = default;
};

/// One tracker item. Items that are pull requests are flagged at ingest and
/// excluded from the user-story analysis downstream.
struct IssueRecord {
    std::uint64_t number = 0;
    std::string title;
    std::string body;
    std::string opener;
    std::optional<std::string> closer;  // present whenever closed_at is
    Timestamp opened_at{};
    std::optional<Timestamp> closed_at;
    bool is_pull_request = false;
    std::vector<IssueEvent> events;
    std::vector<IssueComment> comments;

    bool operator==(const IssueRecord&) const = default;
};

/// Persisted copy of a repository's tracker data; the sole tracker input to
/// analysis. Issues are sorted ascending by number.
struct Snapshot {
    std::string repo_id;
    Timestamp fetched_at{};
    std::vector<IssueRecord> issues;

    bool operator==(const Snapshot&) const = default;
};

}  // namespace miner
