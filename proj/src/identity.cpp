#include "miner/identity.hpp"

#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

template <typename Map, typename Key>
void claim_matcher(Map& index, const Key& key, const std::string& canonical,
                   const std::string& kind) {
    auto [it, inserted] = index.emplace(key, canonical);
    if (!inserted && it->second != canonical)
        throw ValidationError("alias map: " + kind + " matcher bound to both \"" + it->second +
                              "\" and \"" + canonical + "\"");
}

}  // namespace

void AliasMap::add_email(const std::string& canonical, const std::string& email) {
    std::string key = to_lower(email);
    claim_matcher(by_email_, key, canonical, "email \"" + email + "\"");
    entries_[canonical].emails.push_back(email);
}

void AliasMap::add_login(const std::string& canonical, const std::string& login) {
    claim_matcher(by_login_, login, canonical, "login \"" + login + "\"");
    entries_[canonical].logins.push_back(login);
}

void AliasMap::add_exact(const std::string& canonical, const std::string& name,
                         const std::string& email) {
    auto key = std::make_pair(name, to_lower(email));
    claim_matcher(by_exact_, key, canonical, "exact \"" + name + " <" + email + ">\"");
    entries_[canonical].exact.emplace_back(name, email);
}

void AliasMap::add_excluded(std::string canonical_id) { excluded_.insert(std::move(canonical_id)); }

std::optional<std::string> AliasMap::match(const RawActor& actor) const {
    if (actor.name && actor.email) {
        auto it = by_exact_.find({*actor.name, to_lower(*actor.email)});
        if (it != by_exact_.end()) return it->second;
    }
    if (actor.email) {
        auto it = by_email_.find(to_lower(*actor.email));
        if (it != by_email_.end()) return it->second;
    }
    if (actor.login) {
        auto it = by_login_.find(*actor.login);
        if (it != by_login_.end()) return it->second;
    }
    return std::nullopt;
}

void AliasMap::merge_entries(const std::string& into, const std::string& from) {
    if (into == from) return;
    auto it = entries_.find(from);
    if (it == entries_.end()) throw ValidationError("alias map: no entry \"" + from + "\"");
    Entry moved = std::move(it->second);
    entries_.erase(it);
    Entry& target = entries_[into];
    for (auto& [key, value] : by_email_)
        if (value == from) value = into;
    for (auto& [key, value] : by_login_)
        if (value == from) value = into;
    for (auto& [key, value] : by_exact_)
        if (value == from) value = into;
    target.emails.insert(target.emails.end(), moved.emails.begin(), moved.emails.end());
    target.logins.insert(target.logins.end(), moved.logins.begin(), moved.logins.end());
    target.exact.insert(target.exact.end(), moved.exact.begin(), moved.exact.end());
    if (excluded_.erase(from) > 0) excluded_.insert(into);
}

namespace {

[[noreturn]] void alias_error(const std::string& filename, std::size_t lineno,
                              const std::string& what) {
    throw ValidationError(filename + ":" + std::to_string(lineno) + ": " + what);
}

}  // namespace

AliasMap parse_alias_map(std::istream& in, const std::string& filename) {
    AliasMap map;
    std::string current;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view v = trim(line);
        if (v.empty() || v.front() == '#') continue;

        auto space = v.find(' ');
        std::string_view directive = v.substr(0, space);
        std::string_view rest = space == std::string_view::npos ? std::string_view{}
                                                                : trim(v.substr(space + 1));

        try {
            if (directive == "contributor") {
                if (rest.empty()) alias_error(filename, lineno, "contributor line needs an id");
                current = std::string(rest);
            } else if (directive == "exclude") {
                if (rest.empty()) alias_error(filename, lineno, "exclude line needs an id");
                map.add_excluded(std::string(rest));
            } else if (directive == "email") {
                if (current.empty())
                    alias_error(filename, lineno, "matcher before any contributor line");
                if (rest.empty() || rest.find('@') == std::string_view::npos)
                    alias_error(filename, lineno, "email matcher needs an address");
                map.add_email(current, std::string(rest));
            } else if (directive == "login") {
                if (current.empty())
                    alias_error(filename, lineno, "matcher before any contributor line");
                if (rest.empty()) alias_error(filename, lineno, "login matcher needs a login");
                map.add_login(current, std::string(rest));
            } else if (directive == "exact") {
                if (current.empty())
                    alias_error(filename, lineno, "matcher before any contributor line");
                auto open = rest.rfind('<');
                auto close = rest.rfind('>');
                if (open == std::string_view::npos || close != rest.size() - 1 || close <= open + 1)
                    alias_error(filename, lineno,
                                "exact matcher must end with the address in angle brackets");
                std::string_view name = trim(rest.substr(0, open));
                std::string_view email = rest.substr(open + 1, close - open - 1);
                if (name.empty()) alias_error(filename, lineno, "exact matcher needs a name");
                map.add_exact(current, std::string(name), std::string(email));
            } else {
                alias_error(filename, lineno,
                            "unknown directive \"" + std::string(directive) + "\"");
            }
        } catch (const ValidationError& e) {
            // attach location to matcher-overlap errors raised by AliasMap
            std::string msg = e.what();
            if (msg.rfind(filename, 0) == 0) throw;
            alias_error(filename, lineno, msg);
        }
    }
    return map;
}

AliasMap load_alias_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open alias map file \"" + path + "\"");
    return parse_alias_map(in, path);
}

const std::string& ContributorSet::id_for(const RawActor& actor) const {
    auto it = binding_.find(actor);
    if (it == binding_.end()) {
        std::string who = actor.email ? *actor.email : actor.login ? *actor.login : "<unnamed>";
        throw ValidationError("actor \"" + who + "\" was not part of the resolved population");
    }
    return it->second;
}

namespace {

// Union-find over small string-keyed node sets.
class DisjointSets {
public:
    int node(const std::string& key) {
        auto [it, inserted] = index_.emplace(key, static_cast<int>(parent_.size()));
        if (inserted) parent_.push_back(it->second);
        return it->second;
    }
    int find(int a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    void unite(int a, int b) { parent_[find(a)] = find(b); }

private:
    std::unordered_map<std::string, int> index_;
    std::vector<int> parent_;
};

}  // namespace

ContributorSet resolve(const std::vector<RawActor>& actors, const AliasMap& aliases) {
    ContributorSet cs;
    cs.excluded_ = aliases.excluded();

    // Alias claims first; claimed actors do not feed the implicit clustering.
    std::vector<const RawActor*> unclaimed;
    for (const RawActor& actor : actors) {
        if (!actor.email && !actor.login)
            throw ValidationError("actor without email or login cannot be resolved");
        if (auto canonical = aliases.match(actor)) {
            cs.binding_.emplace(actor, *canonical);
            if (!cs.excluded_.contains(*canonical)) cs.contributors_.insert(*canonical);
        } else {
            unclaimed.push_back(&actor);
        }
    }

    // Cluster the rest by shared email (case-insensitive) and shared login.
    DisjointSets sets;
    std::vector<int> actor_node(unclaimed.size());
    for (std::size_t i = 0; i < unclaimed.size(); ++i) {
        const RawActor& a = *unclaimed[i];
        int self = sets.node("a:" + std::to_string(i));
        actor_node[i] = self;
        if (a.email) sets.unite(self, sets.node("e:" + to_lower(*a.email)));
        if (a.login) sets.unite(self, sets.node("l:" + *a.login));
    }

    // Stable id per cluster: smallest email if any member has one, else
    // smallest login. Independent of input order.
    std::unordered_map<int, std::string> cluster_id;
    for (std::size_t i = 0; i < unclaimed.size(); ++i) {
        const RawActor& a = *unclaimed[i];
        const int root = sets.find(actor_node[i]);
        std::string candidate =
            a.email ? "email:" + to_lower(*a.email) : "login:" + *a.login;
        auto [it, inserted] = cluster_id.emplace(root, candidate);
        if (!inserted) {
            const bool cand_email = candidate.rfind("email:", 0) == 0;
            const bool have_email = it->second.rfind("email:", 0) == 0;
            if ((cand_email && !have_email) ||
                (cand_email == have_email && candidate < it->second))
                it->second = candidate;
        }
    }
    for (std::size_t i = 0; i < unclaimed.size(); ++i) {
        const std::string& id = cluster_id.at(sets.find(actor_node[i]));
        cs.binding_.emplace(*unclaimed[i], id);
        if (!cs.excluded_.contains(id)) cs.contributors_.insert(id);
    }
    return cs;
}

std::vector<RawActor> collect_actors(const std::vector<CommitRecord>& commits,
                                     const std::vector<IssueRecord>& issues) {
    std::vector<RawActor> actors;
    for (const CommitRecord& c : commits) actors.push_back(RawActor::from_commit(c));
    for (const IssueRecord& i : issues) {
        actors.push_back(RawActor::from_login(i.opener));
        if (i.closer) actors.push_back(RawActor::from_login(*i.closer));
        for (const IssueEvent& e : i.events)
            if (e.actor) actors.push_back(RawActor::from_login(*e.actor));
        for (const IssueComment& c : i.comments) actors.push_back(RawActor::from_login(c.actor));
    }
    return actors;
}

std::uint64_t active_contributor_count(const ContributorSet& cs,
                                       const std::vector<CommitRecord>& commits,
                                       const std::vector<IssueRecord>& issues) {
    std::unordered_set<std::string> active;
    for (const RawActor& actor : collect_actors(commits, issues)) {
        const std::string& id = cs.id_for(actor);
        if (!cs.is_excluded(id)) active.insert(id);
    }
    if (active.empty())
        throw EmptyWindowError("no contributor was active in the study window");
    return active.size();
}

}  // namespace miner
