#pragma once

#include <string>
#include <vector>

#include "miner/errors.hpp"
#include "miner/time.hpp"

namespace miner {

/// One student project: where its artifacts live and when it ended.
struct ProjectSpec {
    std::string name;
    std::string repo_source;  // dump file, local clone directory, or remote "owner/repo"
    Timestamp project_end{};
    int window_days = 7;
    int last_minute_hours = 24;

    /// Throws ValidationError on out-of-range values.
    void validate() const {
        if (name.empty()) throw ValidationError("project name must be non-empty");
        if (window_days < 1)
            throw ValidationError("project \"" + name + "\": window_days must be at least 1");
        if (last_minute_hours < 1 || last_minute_hours > window_days * 24)
            throw ValidationError("project \"" + name +
                                  "\": last_minute_hours must be in [1, window_days * 24]");
    }

    TimeWindow window() const { return window_from_project_end(project_end, window_days); }
};

/// A course installment: the unit of comparison in the report tables.
struct CohortSpec {
    std::string label;  // e.g. "2017/18"
    bool kanban_flag = false;
    std::vector<ProjectSpec> projects;

    void validate() const {
        if (label.empty()) throw ValidationError("cohort label must be non-empty");
        if (projects.empty())
            throw ValidationError("cohort \"" + label + "\" must list at least one project");
        for (std::size_t i = 0; i < projects.size(); ++i) {
            projects[i].validate();
            for (std::size_t k = i + 1; k < projects.size(); ++k)
                if (projects[i].name == projects[k].name)
                    throw ValidationError("cohort \"" + label + "\": duplicate project label \"" +
                                          projects[i].name + "\"");
        }
    }
};

}  // namespace miner
