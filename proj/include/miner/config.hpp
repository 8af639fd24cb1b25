#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "miner/model.hpp"
#include "miner/options.hpp"

namespace miner {

/// Everything a comparison run needs, loaded from one config file. Relative
/// paths inside the file resolve against the file's own directory, so runs
/// do not depend on the current working directory.
struct RunConfig {
    std::vector<CohortSpec> cohorts;
    std::string alias_map_path;  // empty = no alias file
    std::string snapshot_dir = ".";
    std::string api_base_url = "https://api.github.com";
    AnalysisOptions options;
    std::filesystem::path base_dir = ".";

    std::filesystem::path resolve(const std::string& path) const {
        std::filesystem::path p(path);
        return p.is_absolute() ? p : base_dir / p;
    }

    const CohortSpec& cohort_by_label(const std::string& label) const;
};

RunConfig parse_run_config(std::string_view json_text, const std::filesystem::path& base_dir,
                           const std::string& name = "<config>");
RunConfig load_run_config(const std::string& path);

}  // namespace miner
