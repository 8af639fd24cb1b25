#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "miner/commit.hpp"
#include "miner/issue.hpp"
#include "miner/time.hpp"

namespace miner {

/// One raw account identity as observed in a commit or tracker artifact.
struct RawActor {
    enum class Source { commit, tracker };

    Source source = Source::commit;
    std::optional<std::string> name;
    std::optional<std::string> email;
    std::optional<std::string> login;

    static RawActor from_commit(const CommitRecord& c) {
        return RawActor{Source::commit, c.author_name, c.author_email, std::nullopt};
    }
    static RawActor from_login(std::string login) {
        return RawActor{Source::tracker, std::nullopt, std::nullopt, std::move(login)};
    }

    auto operator<=>(const RawActor&) const = default;
};

/// The manual deduplication table: matchers grouped under canonical
/// contributor ids, plus optional exclusions (e.g. tutor accounts).
class AliasMap {
public:
    struct Entry {
        std::vector<std::string> emails;          // matched case-insensitively
        std::vector<std::string> logins;          // matched exactly
        std::vector<std::pair<std::string, std::string>> exact;  // (name, email)
    };

    AliasMap() = default;

    /// Adds matchers under `canonical`; throws ValidationError if any matcher
    /// is already bound to a different canonical id.
    void add_email(const std::string& canonical, const std::string& email);
    void add_login(const std::string& canonical, const std::string& login);
    void add_exact(const std::string& canonical, const std::string& name,
                   const std::string& email);
    void add_excluded(std::string canonical_id);

    const std::map<std::string, Entry>& entries() const { return entries_; }
    const std::set<std::string>& excluded() const { return excluded_; }

    /// Canonical id the actor is claimed by, if any. Matcher precedence:
    /// exact (name,email) pair, then email, then login.
    std::optional<std::string> match(const RawActor& actor) const;

    /// Merges the matchers of `from` into `into` and drops `from`.
    /// Contributor counts never increase under this operation.
    void merge_entries(const std::string& into, const std::string& from);

private:
    std::map<std::string, Entry> entries_;
    std::map<std::string, std::string> by_email_;  // lowercased email -> canonical
    std::map<std::string, std::string> by_login_;
    std::map<std::pair<std::string, std::string>, std::string> by_exact_;
    std::set<std::string> excluded_;
};

/// Parses the alias map file format:
///
///   # comment
///   contributor <canonical-id>
///     email <address>
///     login <login>
///     exact <display name> <address-in-angle-brackets>
///   exclude <canonical-id>
///
/// Errors carry the file name and 1-based line number.
AliasMap parse_alias_map(std::istream& in, const std::string& filename = "<aliases>");
AliasMap load_alias_map(const std::string& path);

/// Deduplicated canonical contributors with the actor-to-id binding.
/// Excluded ids are bound but not counted as contributors.
class ContributorSet {
public:
    const std::set<std::string>& contributors() const { return contributors_; }

    /// Canonical id for an actor this set was built from. Throws
    /// ValidationError for actors outside the resolved population.
    const std::string& id_for(const RawActor& actor) const;

    /// Non-throwing variant; nullptr for unknown actors.
    const std::string* find_id(const RawActor& actor) const {
        auto it = binding_.find(actor);
        return it == binding_.end() ? nullptr : &it->second;
    }

    bool is_excluded(const std::string& canonical_id) const {
        return excluded_.contains(canonical_id);
    }

private:
    friend ContributorSet resolve(const std::vector<RawActor>&, const AliasMap&);

    std::set<std::string> contributors_;  // excludes excluded ids
    std::set<std::string> excluded_;
    std::map<RawActor, std::string> binding_;
};

/// Binds every actor to exactly one canonical id. Alias claims take
/// precedence; unclaimed actors then cluster by identical email
/// (case-insensitive) and identical login, transitively. Unclaimed clusters
/// get a stable id derived from their most specific field ("email:<addr>",
/// else "login:<login>"). Deterministic under input permutation.
ContributorSet resolve(const std::vector<RawActor>& actors, const AliasMap& aliases);

/// Number of canonical ids with at least one commit, issue-open, issue-close,
/// event, or comment in the (already window-filtered) inputs. Excluded ids do
/// not count. Throws EmptyWindowError when nobody was active.
std::uint64_t active_contributor_count(const ContributorSet& cs,
                                       const std::vector<CommitRecord>& commits,
                                       const std::vector<IssueRecord>& issues);

/// All raw actors appearing in the given commits and issues, in encounter
/// order (the population resolve() must cover).
std::vector<RawActor> collect_actors(const std::vector<CommitRecord>& commits,
                                     const std::vector<IssueRecord>& issues);

}  // namespace miner
