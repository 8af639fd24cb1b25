#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "miner/time.hpp"

namespace miner {

/// One changed file in a commit. Line counts are absent for binary files,
/// never fabricated as zeros.
struct FileDelta {
    std::string path;
    std::optional<std::uint64_t> lines_added;
    std::optional<std::uint64_t> lines_deleted;

    bool operator==(const FileDelta&) const = default;
};

/// One version-control change as parsed from the commit-log dump.
struct CommitRecord {
    std::string id;  // 40 lowercase hex chars
    std::string author_name;
    std::string author_email;
    Timestamp author_time{};
    Timestamp committer_time{};
    std::string message;
    unsigned parent_count = 0;
    std::vector<FileDelta> file_deltas;

    bool is_merge() const { return parent_count >= 2; }

    bool operator==(const CommitRecord&) const = default;
};

}  // namespace miner
