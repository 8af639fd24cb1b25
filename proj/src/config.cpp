#include "miner/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "miner/errors.hpp"

namespace miner {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& name, const std::string& what) {
    throw ValidationError(name + ": " + what);
}

std::string get_string(const json& j, const char* key, const std::string& name,
                       const std::string& context) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
        fail(name, context + " needs a string \"" + key + "\"");
    return it->get<std::string>();
}

TimestampSource timestamp_source_from(const std::string& v, const std::string& name) {
    if (v == "author") return TimestampSource::author;
    if (v == "committer") return TimestampSource::committer;
    fail(name, "timestamp_source must be \"author\" or \"committer\", got \"" + v + "\"");
}

RefsMode refs_mode_from(const std::string& v, const std::string& name) {
    if (v == "any") return RefsMode::any;
    if (v == "keyword") return RefsMode::keyword;
    fail(name, "refs must be \"any\" or \"keyword\", got \"" + v + "\"");
}

TouchedFilesMode touched_files_from(const std::string& v, const std::string& name) {
    if (v == "per_commit") return TouchedFilesMode::per_commit;
    if (v == "distinct") return TouchedFilesMode::distinct;
    fail(name, "touched_files must be \"per_commit\" or \"distinct\", got \"" + v + "\"");
}

AggregateMode aggregate_from(const std::string& v, const std::string& name) {
    if (v == "pool") return AggregateMode::pool;
    if (v == "mean_of_projects") return AggregateMode::mean_of_projects;
    fail(name, "aggregate must be \"pool\" or \"mean_of_projects\", got \"" + v + "\"");
}

bool get_bool(const json& j, const char* key, bool fallback, const std::string& name) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_boolean()) fail(name, std::string("\"") + key + "\" must be a boolean");
    return it->get<bool>();
}

int get_int(const json& j, const char* key, int fallback, const std::string& name) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) fail(name, std::string("\"") + key + "\" must be an integer");
    return it->get<int>();
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir,
                           const std::string& name) {
    json doc = json::parse(json_text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) fail(name, "not a valid JSON object");

    RunConfig config;
    config.base_dir = base_dir;
    if (doc.contains("alias_map")) config.alias_map_path = get_string(doc, "alias_map", name, "config");
    if (doc.contains("snapshot_dir"))
        config.snapshot_dir = get_string(doc, "snapshot_dir", name, "config");
    if (doc.contains("api_base_url"))
        config.api_base_url = get_string(doc, "api_base_url", name, "config");

    if (auto it = doc.find("options"); it != doc.end()) {
        if (!it->is_object()) fail(name, "\"options\" must be an object");
        const json& opts = *it;
        if (opts.contains("timestamp_source"))
            config.options.timestamp_source =
                timestamp_source_from(get_string(opts, "timestamp_source", name, "options"), name);
        if (opts.contains("refs"))
            config.options.refs = refs_mode_from(get_string(opts, "refs", name, "options"), name);
        if (opts.contains("touched_files"))
            config.options.touched_files =
                touched_files_from(get_string(opts, "touched_files", name, "options"), name);
        if (opts.contains("aggregate"))
            config.options.aggregate =
                aggregate_from(get_string(opts, "aggregate", name, "options"), name);
        config.options.normalize_line_changes =
            get_bool(opts, "normalize_line_changes", false, name);
        config.options.strict_window_events = get_bool(opts, "strict_window_events", false, name);
    }

    auto cohorts = doc.find("cohorts");
    if (cohorts == doc.end() || !cohorts->is_array() || cohorts->empty())
        fail(name, "needs a non-empty \"cohorts\" array");
    for (std::size_t i = 0; i < cohorts->size(); ++i) {
        const json& jc = (*cohorts)[i];
        const std::string context = "cohorts[" + std::to_string(i) + "]";
        if (!jc.is_object()) fail(name, context + " must be an object");
        CohortSpec cohort;
        cohort.label = get_string(jc, "label", name, context);
        cohort.kanban_flag = get_bool(jc, "kanban_flag", false, name);
        auto projects = jc.find("projects");
        if (projects == jc.end() || !projects->is_array() || projects->empty())
            fail(name, context + " needs a non-empty \"projects\" array");
        for (std::size_t k = 0; k < projects->size(); ++k) {
            const json& jp = (*projects)[k];
            const std::string pcontext = context + ".projects[" + std::to_string(k) + "]";
            if (!jp.is_object()) fail(name, pcontext + " must be an object");
            ProjectSpec project;
            project.name = get_string(jp, "name", name, pcontext);
            project.repo_source = get_string(jp, "repo_source", name, pcontext);
            try {
                project.project_end = parse_iso8601_utc(get_string(jp, "project_end", name, pcontext));
            } catch (const ValidationError& e) {
                fail(name, pcontext + ": " + e.what());
            }
            project.window_days = get_int(jp, "window_days", 7, name);
            project.last_minute_hours = get_int(jp, "last_minute_hours", 24, name);
            cohort.projects.push_back(std::move(project));
        }
        try {
            cohort.validate();
        } catch (const ValidationError& e) {
            fail(name, e.what());
        }
        for (const CohortSpec& existing : config.cohorts)
            if (existing.label == cohort.label)
                fail(name, "duplicate cohort label \"" + cohort.label + "\"");
        config.cohorts.push_back(std::move(cohort));
    }
    return config;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file \"" + path + "\"");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::filesystem::path dir = std::filesystem::path(path).parent_path();
    if (dir.empty()) dir = ".";
    return parse_run_config(buf.str(), dir, path);
}

const CohortSpec& RunConfig::cohort_by_label(const std::string& label) const {
    for (const CohortSpec& cohort : cohorts)
        if (cohort.label == label) return cohort;
    throw ValidationError("no cohort labeled \"" + label + "\" in the config");
}

}  // namespace miner
