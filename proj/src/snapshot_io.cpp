#include "miner/snapshot_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "miner/errors.hpp"

namespace miner {

namespace {

using nlohmann::json;

[[noreturn]] void schema_fail(const std::string& path, const std::string& what) {
    throw SchemaError(path, what);
}

const json& require(const json& obj, const std::string& parent, const char* key) {
    if (!obj.is_object()) schema_fail(parent, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end())
        schema_fail(parent.empty() ? key : parent + "." + key, "missing required field");
    return *it;
}

std::string field_path(const std::string& parent, const char* key) {
    return parent.empty() ? key : parent + "." + key;
}

std::string get_string(const json& obj, const std::string& parent, const char* key) {
    const json& v = require(obj, parent, key);
    if (!v.is_string()) schema_fail(field_path(parent, key), "expected a string");
    return v.get<std::string>();
}

Timestamp get_time(const json& obj, const std::string& parent, const char* key) {
    std::string text = get_string(obj, parent, key);
    try {
        return parse_iso8601_utc(text);
    } catch (const ValidationError& e) {
        schema_fail(field_path(parent, key), e.what());
    }
}

std::uint64_t get_uint(const json& obj, const std::string& parent, const char* key) {
    const json& v = require(obj, parent, key);
    if (!v.is_number_unsigned()) schema_fail(field_path(parent, key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

bool get_bool(const json& obj, const std::string& parent, const char* key) {
    const json& v = require(obj, parent, key);
    if (!v.is_boolean()) schema_fail(field_path(parent, key), "expected a boolean");
    return v.get<bool>();
}

IssueEvent event_from_json(const json& j, const std::string& path) {
    IssueEvent e;
    e.kind = get_string(j, path, "kind");
    if (e.kind.empty()) schema_fail(path + ".kind", "must be non-empty");
    if (e.kind == "commented")
        schema_fail(path + ".kind", "comments are modeled separately, not as events");
    if (auto it = j.find("actor"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) schema_fail(path + ".actor", "expected a string");
        e.actor = it->get<std::string>();
    }
    e.at = get_time(j, path, "at");
    return e;
}

IssueComment comment_from_json(const json& j, const std::string& path) {
    IssueComment c;
    c.actor = get_string(j, path, "actor");
    c.at = get_time(j, path, "at");
    c.length_chars = get_uint(j, path, "length_chars");
    return c;
}

IssueRecord issue_from_json(const json& j, const std::string& path) {
    IssueRecord rec;
    rec.number = get_uint(j, path, "number");
    if (rec.number == 0) schema_fail(path + ".number", "issue numbers start at 1");
    rec.title = get_string(j, path, "title");
    rec.body = get_string(j, path, "body");
    rec.opener = get_string(j, path, "opener");
    rec.opened_at = get_time(j, path, "opened_at");
    rec.is_pull_request = get_bool(j, path, "is_pull_request");

    if (auto it = j.find("closed_at"); it != j.end() && !it->is_null())
        rec.closed_at = get_time(j, path, "closed_at");
    if (auto it = j.find("closer"); it != j.end() && !it->is_null()) {
        if (!it->is_string()) schema_fail(path + ".closer", "expected a string");
        rec.closer = it->get<std::string>();
    }
    if (rec.closed_at) {
        if (!rec.closer) schema_fail(path + ".closer", "closed issue must name its closer");
        if (*rec.closed_at < rec.opened_at)
            schema_fail(path + ".closed_at", "must not precede opened_at");
    }

    const json& events = require(j, path, "events");
    if (!events.is_array()) schema_fail(path + ".events", "expected an array");
    for (std::size_t i = 0; i < events.size(); ++i)
        rec.events.push_back(
            event_from_json(events[i], path + ".events[" + std::to_string(i) + "]"));

    const json& comments = require(j, path, "comments");
    if (!comments.is_array()) schema_fail(path + ".comments", "expected an array");
    for (std::size_t i = 0; i < comments.size(); ++i)
        rec.comments.push_back(
            comment_from_json(comments[i], path + ".comments[" + std::to_string(i) + "]"));
    return rec;
}

}  // namespace

std::string save_snapshot(const Snapshot& snapshot) {
    for (std::size_t i = 1; i < snapshot.issues.size(); ++i)
        if (snapshot.issues[i].number <= snapshot.issues[i - 1].number)
            throw ValidationError("snapshot issues must be sorted ascending and unique by number");
    json issues = json::array();
    for (const IssueRecord& rec : snapshot.issues) {
        json events = json::array();
        for (const IssueEvent& e : rec.events) {
            json je{{"kind", e.kind}, {"at", format_iso8601_utc(e.at)}};
            if (e.actor) je["actor"] = *e.actor;
            events.push_back(std::move(je));
        }
        json comments = json::array();
        for (const IssueComment& c : rec.comments)
            comments.push_back({{"actor", c.actor},
                                {"at", format_iso8601_utc(c.at)},
                                {"length_chars", c.length_chars}});
        json ji{{"number", rec.number},
                {"title", rec.title},
                {"body", rec.body},
                {"opener", rec.opener},
                {"opened_at", format_iso8601_utc(rec.opened_at)},
                {"is_pull_request", rec.is_pull_request},
                {"events", std::move(events)},
                {"comments", std::move(comments)}};
        if (rec.closed_at) ji["closed_at"] = format_iso8601_utc(*rec.closed_at);
        if (rec.closer) ji["closer"] = *rec.closer;
        issues.push_back(std::move(ji));
    }
    json doc{{"schema_version", 1},
             {"repo_id", snapshot.repo_id},
             {"fetched_at", format_iso8601_utc(snapshot.fetched_at)},
             {"issues", std::move(issues)}};
    return doc.dump(2) + "\n";
}

Snapshot load_snapshot(std::string_view bytes) {
    json doc = json::parse(bytes, nullptr, false);
    if (doc.is_discarded()) schema_fail("<document>", "not valid JSON");

    const json& version = require(doc, "", "schema_version");
    if (!version.is_number_integer() || version.get<int>() != 1)
        schema_fail("schema_version", "expected 1");

    Snapshot snapshot;
    snapshot.repo_id = get_string(doc, "", "repo_id");
    snapshot.fetched_at = get_time(doc, "", "fetched_at");

    const json& issues = require(doc, "", "issues");
    if (!issues.is_array()) schema_fail("issues", "expected an array");
    std::uint64_t previous = 0;
    for (std::size_t i = 0; i < issues.size(); ++i) {
        const std::string path = "issues[" + std::to_string(i) + "]";
        IssueRecord rec = issue_from_json(issues[i], path);
        if (i > 0 && rec.number <= previous)
            schema_fail(path + ".number", "issues must be sorted ascending and unique by number");
        previous = rec.number;
        snapshot.issues.push_back(std::move(rec));
    }
    return snapshot;
}

Snapshot load_snapshot_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open snapshot file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return load_snapshot(buf.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path + ": " + e.path(), e.message());
    }
}

void save_snapshot_file(const Snapshot& snapshot, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write snapshot file \"" + path + "\"");
    out << save_snapshot(snapshot);
    if (!out) throw IoError("failed while writing snapshot file \"" + path + "\"");
}

std::vector<IssueRecord> select_study_issues(const Snapshot& snapshot, const TimeWindow& w) {
    std::vector<IssueRecord> selected;
    for (const IssueRecord& rec : snapshot.issues) {
        if (rec.is_pull_request) continue;
        if (!rec.closed_at) continue;
        if (!window_contains(w, *rec.closed_at)) continue;
        selected.push_back(rec);
    }
    return selected;
}

std::vector<IssueRecord> restrict_events_to_window(std::vector<IssueRecord> issues,
                                                   const TimeWindow& w) {
    for (IssueRecord& rec : issues) {
        std::erase_if(rec.events, [&](const IssueEvent& e) { return !window_contains(w, e.at); });
        std::erase_if(rec.comments,
                      [&](const IssueComment& c) { return !window_contains(w, c.at); });
    }
    return issues;
}

}  // namespace miner
