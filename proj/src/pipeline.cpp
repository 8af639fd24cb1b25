#include "miner/pipeline.hpp"

#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "miner/commit_log.hpp"
#include "miner/errors.hpp"
#include "miner/snapshot_io.hpp"

namespace miner {

namespace fs = std::filesystem;

std::vector<CommitRecord> load_project_commits(const ProjectSpec& project,
                                               const RunConfig& config) {
    if (project.repo_source == "-") {
        try {
            return parse_commit_log(std::cin);
        } catch (const ParseError& e) {
            throw ValidationError(std::string("<stdin>: ") + e.what());
        }
    }
    const fs::path source = config.resolve(project.repo_source);
    std::error_code ec;
    if (fs::is_directory(source, ec)) return read_repository_log(source.string());
    if (fs::is_regular_file(source, ec)) {
        std::ifstream in(source, std::ios::binary);
        if (!in) throw IoError("cannot open commit dump \"" + source.string() + "\"");
        try {
            return parse_commit_log(in);
        } catch (const ParseError& e) {
            throw ValidationError(source.string() + ": " + e.what());
        }
    }
    throw IoError("project \"" + project.name + "\": repo_source \"" + project.repo_source +
                  "\" is neither a dump file nor a local repository (run `fetch` and point "
                  "repo_source at a dump or clone for analysis)");
}

Snapshot load_project_snapshot(const ProjectSpec& project, const RunConfig& config) {
    const fs::path path =
        config.resolve(config.snapshot_dir) / (project.name + ".snapshot.json");
    return load_snapshot_file(path.string());
}

ProjectActivity build_activity(const ProjectSpec& project, std::vector<CommitRecord> commits,
                               const Snapshot& snapshot, const AnalysisOptions& options) {
    project.validate();
    const TimeWindow window = project.window();

    ProjectActivity activity{project.name, window,
                             std::chrono::hours{project.last_minute_hours},
                             filter_commits(commits, window, options.timestamp_source),
                             select_study_issues(snapshot, window)};
    if (options.strict_window_events)
        activity.issues = restrict_events_to_window(std::move(activity.issues), window);
    return activity;
}

namespace {

std::vector<ProjectActivity> load_cohort_activities(const CohortSpec& cohort,
                                                    const RunConfig& config) {
    std::vector<ProjectActivity> activities(cohort.projects.size(),
                                            ProjectActivity{"",
                                                            TimeWindow(Timestamp{},
                                                                       Timestamp{} + Duration{1}),
                                                            Duration{},
                                                            {},
                                                            {}});
    std::exception_ptr error;
    const auto count = static_cast<std::int64_t>(cohort.projects.size());

#pragma omp parallel for schedule(dynamic) if (count > 1)
    for (std::int64_t i = 0; i < count; ++i) {
        try {
            const ProjectSpec& project = cohort.projects[i];
            auto commits = load_project_commits(project, config);
            auto snapshot = load_project_snapshot(project, config);
            activities[i] = build_activity(project, std::move(commits), snapshot, config.options);
        } catch (...) {
#pragma omp critical
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return activities;
}

}  // namespace

CohortMetrics analyze_cohort(const CohortSpec& cohort, const RunConfig& config,
                             const AliasMap& aliases) {
    cohort.validate();
    return assemble(cohort, load_cohort_activities(cohort, config), aliases, config.options);
}

std::vector<CohortMetrics> analyze_all(const RunConfig& config, const AliasMap& aliases) {
    std::vector<CohortMetrics> rows;
    rows.reserve(config.cohorts.size());
    for (const CohortSpec& cohort : config.cohorts)
        rows.push_back(analyze_cohort(cohort, config, aliases));
    return rows;
}

std::vector<std::string> fetch_snapshots(const RunConfig& config, TrackerClient& client) {
    const fs::path dir = config.resolve(config.snapshot_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create snapshot directory \"" + dir.string() + "\"");

    std::vector<std::string> written;
    for (const CohortSpec& cohort : config.cohorts) {
        for (const ProjectSpec& project : cohort.projects) {
            Snapshot snapshot = client.fetch_snapshot(project.repo_source);
            const fs::path path = dir / (project.name + ".snapshot.json");
            save_snapshot_file(snapshot, path.string());
            written.push_back(path.string());
        }
    }
    return written;
}

AliasMap load_configured_aliases(const RunConfig& config) {
    if (config.alias_map_path.empty()) return AliasMap{};
    return load_alias_map(config.resolve(config.alias_map_path).string());
}

}  // namespace miner
