#include "miner/config.hpp"

#include <gtest/gtest.h>

#include "miner/errors.hpp"
#include "miner/time.hpp"

namespace miner {
namespace {

constexpr const char* kGoodConfig = R"({
  "snapshot_dir": "snapshots",
  "alias_map": "aliases.txt",
  "api_base_url": "https://git.example.edu/api/v3",
  "options": {
    "timestamp_source": "committer",
    "refs": "keyword",
    "touched_files": "distinct",
    "normalize_line_changes": true,
    "aggregate": "mean_of_projects",
    "strict_window_events": true
  },
  "cohorts": [
    {"label": "2013/14", "kanban_flag": false, "projects": [
      {"name": "alpha", "repo_source": "alpha.dump",
       "project_end": "2014-01-31T00:00:00Z", "window_days": 7, "last_minute_hours": 24}
    ]},
    {"label": "2015/16", "kanban_flag": true, "projects": [
      {"name": "beta", "repo_source": "org/beta", "project_end": "2016-01-29T00:00:00Z"}
    ]}
  ]
})";

TEST(RunConfig, ParsesEverything) {
    const RunConfig config = parse_run_config(kGoodConfig, "/base");
    EXPECT_EQ(config.snapshot_dir, "snapshots");
    EXPECT_EQ(config.alias_map_path, "aliases.txt");
    EXPECT_EQ(config.api_base_url, "https://git.example.edu/api/v3");
    EXPECT_EQ(config.options.timestamp_source, TimestampSource::committer);
    EXPECT_EQ(config.options.refs, RefsMode::keyword);
    EXPECT_EQ(config.options.touched_files, TouchedFilesMode::distinct);
    EXPECT_TRUE(config.options.normalize_line_changes);
    EXPECT_EQ(config.options.aggregate, AggregateMode::mean_of_projects);
    EXPECT_TRUE(config.options.strict_window_events);

    ASSERT_EQ(config.cohorts.size(), 2u);
    EXPECT_EQ(config.cohorts[0].label, "2013/14");
    EXPECT_FALSE(config.cohorts[0].kanban_flag);
    EXPECT_TRUE(config.cohorts[1].kanban_flag);
    ASSERT_EQ(config.cohorts[0].projects.size(), 1u);
    const ProjectSpec& alpha = config.cohorts[0].projects[0];
    EXPECT_EQ(alpha.project_end, parse_iso8601_utc("2014-01-31T00:00:00Z"));
    EXPECT_EQ(alpha.window_days, 7);

    // defaults apply where omitted
    const ProjectSpec& beta = config.cohorts[1].projects[0];
    EXPECT_EQ(beta.window_days, 7);
    EXPECT_EQ(beta.last_minute_hours, 24);

    EXPECT_EQ(config.resolve("aliases.txt"), std::filesystem::path("/base/aliases.txt"));
    EXPECT_EQ(config.resolve("/abs/x"), std::filesystem::path("/abs/x"));
    EXPECT_EQ(config.cohort_by_label("2015/16").projects[0].name, "beta");
    EXPECT_THROW(config.cohort_by_label("1999/00"), ValidationError);
}

TEST(RunConfig, DefaultsWithMinimalDocument) {
    const RunConfig config = parse_run_config(R"({"cohorts": [
        {"label": "c", "projects": [
          {"name": "p", "repo_source": "p.dump", "project_end": "2024-01-31T00:00:00Z"}]}]})",
                                              ".");
    EXPECT_EQ(config.snapshot_dir, ".");
    EXPECT_TRUE(config.alias_map_path.empty());
    EXPECT_EQ(config.options.timestamp_source, TimestampSource::author);
    EXPECT_EQ(config.options.aggregate, AggregateMode::pool);
}

TEST(RunConfig, RejectsBadDocuments) {
    EXPECT_THROW(parse_run_config("not json", "."), ValidationError);
    EXPECT_THROW(parse_run_config("{}", "."), ValidationError);  // no cohorts
    EXPECT_THROW(parse_run_config(R"({"cohorts": []})", "."), ValidationError);
    // empty projects
    EXPECT_THROW(parse_run_config(R"({"cohorts": [{"label": "c", "projects": []}]})", "."),
                 ValidationError);
    // bad option value
    EXPECT_THROW(parse_run_config(R"({"options": {"refs": "sometimes"}, "cohorts": [
        {"label": "c", "projects": [
          {"name": "p", "repo_source": "s", "project_end": "2024-01-31T00:00:00Z"}]}]})",
                                  "."),
                 ValidationError);
    // malformed project_end
    EXPECT_THROW(parse_run_config(R"({"cohorts": [{"label": "c", "projects": [
          {"name": "p", "repo_source": "s", "project_end": "soon"}]}]})",
                                  "."),
                 ValidationError);
}

TEST(RunConfig, EnforcesModelInvariants) {
    // duplicate project labels within a cohort
    EXPECT_THROW(parse_run_config(R"({"cohorts": [{"label": "c", "projects": [
          {"name": "p", "repo_source": "a", "project_end": "2024-01-31T00:00:00Z"},
          {"name": "p", "repo_source": "b", "project_end": "2024-01-31T00:00:00Z"}]}]})",
                                  "."),
                 ValidationError);
    // duplicate cohort labels
    EXPECT_THROW(parse_run_config(R"({"cohorts": [
        {"label": "c", "projects": [
          {"name": "p", "repo_source": "a", "project_end": "2024-01-31T00:00:00Z"}]},
        {"label": "c", "projects": [
          {"name": "q", "repo_source": "b", "project_end": "2024-01-31T00:00:00Z"}]}]})",
                                  "."),
                 ValidationError);
    // window_days must be positive
    EXPECT_THROW(parse_run_config(R"({"cohorts": [{"label": "c", "projects": [
          {"name": "p", "repo_source": "a", "project_end": "2024-01-31T00:00:00Z",
           "window_days": 0}]}]})",
                                  "."),
                 ValidationError);
    // last-minute threshold cannot exceed the window
    EXPECT_THROW(parse_run_config(R"({"cohorts": [{"label": "c", "projects": [
          {"name": "p", "repo_source": "a", "project_end": "2024-01-31T00:00:00Z",
           "window_days": 1, "last_minute_hours": 48}]}]})",
                                  "."),
                 ValidationError);
}

}  // namespace
}  // namespace miner
