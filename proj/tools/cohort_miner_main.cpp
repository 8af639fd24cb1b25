#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "miner/commit_log.hpp"
#include "miner/config.hpp"
#include "miner/errors.hpp"
#include "miner/pipeline.hpp"
#include "miner/report.hpp"
#include "miner/survey.hpp"

namespace {

using namespace miner;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write output file \"" + out_path + "\"");
    out << text;
    if (!out) throw IoError("failed while writing \"" + out_path + "\"");
}

std::string render_cohort_tables(const std::vector<CohortMetrics>& rows, TableFormat format) {
    std::string text = render_text_table(rows, format);
    text += '\n';
    text += render_commit_table(rows, format);
    text += '\n';
    text += render_issue_table(rows, format);
    return text;
}

std::string render_survey_report(const SurveyData& survey, TableFormat format) {
    std::vector<LikertRow> likert_rows;
    std::vector<BoxplotRow> boxplot_rows;
    std::string text;

    for (const SurveyQuestion& q : survey.questions) {
        if (q.kind != QuestionKind::likert) continue;
        const LikertSample sample = survey.likert_sample(q);
        if (sample.values.empty()) continue;
        likert_rows.push_back(
            {q.id, q.prompt, sample.values.size(), likert_summary(sample)});
        std::vector<double> values(sample.values.begin(), sample.values.end());
        boxplot_rows.push_back({q.id, q.prompt, boxplot_stats(values)});
    }
    if (!likert_rows.empty()) {
        text += render_likert_table(likert_rows, format);
        text += '\n';
        text += render_table(make_boxplot_table(boxplot_rows), format);
    }

    for (const SurveyQuestion& q : survey.questions) {
        if (q.kind != QuestionKind::choice) continue;
        const auto responses = survey.choice_responses(q);
        text += '\n';
        text += render_table(make_choice_table(choice_tally(q.id, responses, q.options), q.prompt),
                             format);
    }

    // Free-text answers are only echoed; labeling them is out of scope.
    const char* comment_prefix = format == TableFormat::markdown ? "" : "# ";
    for (const SurveyQuestion& q : survey.questions) {
        if (q.kind != QuestionKind::text) continue;
        const auto answers = survey.text_answers(q);
        text += '\n';
        text += comment_prefix;
        text += "Question " + q.id + (q.prompt.empty() ? "" : ": " + q.prompt) +
                " (free text, N=" + std::to_string(answers.size()) + ")\n";
        for (const std::string& answer : answers) {
            text += comment_prefix;
            text += "- " + answer + "\n";
        }
    }
    return text;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cohort-miner: mines commit and issue-tracker artifacts of project cohorts and "
                 "renders cross-cohort comparison tables"};
    app.require_subcommand(1);

    std::string config_path = "./cohorts.conf";
    app.add_option("--config", config_path, "cohort configuration file")
        ->capture_default_str();

    std::string format_name = "markdown";
    std::string out_path;
    std::string cohort_label;
    std::string survey_table;
    std::string questions_path;
    std::string repo_path = "<repo>";

    CLI::App* fetch = app.add_subcommand("fetch", "fetch tracker snapshots for every project "
                                                  "(token from COHORT_MINER_TOKEN)");

    CLI::App* analyze = app.add_subcommand("analyze", "analyze one cohort and render its tables");
    analyze->add_option("cohort", cohort_label, "cohort label from the config")->required();
    analyze->add_option("--format", format_name, "markdown|csv|machine")->capture_default_str();
    analyze->add_option("--out", out_path, "write to file instead of stdout");

    CLI::App* compare = app.add_subcommand("compare", "analyze all cohorts and render the three "
                                                      "comparison tables");
    compare->add_option("--format", format_name, "markdown|csv|machine")->capture_default_str();
    compare->add_option("--out", out_path, "write to file instead of stdout");

    CLI::App* survey = app.add_subcommand("survey", "summarize a survey response table");
    survey->add_option("table", survey_table, "delimiter-separated response table")->required();
    survey->add_option("--questions", questions_path,
                       "sidecar question config (default <table>.questions.json)");
    survey->add_option("--format", format_name, "markdown|csv|machine")->capture_default_str();
    survey->add_option("--out", out_path, "write to file instead of stdout");

    CLI::App* dump_cmd = app.add_subcommand("dump-cmd", "print the log invocation that produces "
                                                        "the commit dump format");
    dump_cmd->add_option("repo", repo_path, "local repository path to substitute");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (dump_cmd->parsed()) {
            std::cout << dump_command_line(repo_path) << "\n";
            return 0;
        }

        if (fetch->parsed()) {
            const RunConfig config = load_run_config(config_path);
            FetchConfig fetch_config;
            fetch_config.base_url = config.api_base_url;
            if (const char* token = std::getenv("COHORT_MINER_TOKEN")) fetch_config.token = token;
            auto transport = make_httplib_transport();
            TrackerClient client(*transport, fetch_config);
            for (const std::string& path : fetch_snapshots(config, client))
                std::cerr << "wrote " << path << "\n";
            return 0;
        }

        const TableFormat format = table_format_from_string(format_name);

        if (survey->parsed()) {
            if (questions_path.empty()) questions_path = survey_table + ".questions.json";
            emit(render_survey_report(load_survey(survey_table, questions_path), format), out_path);
            return 0;
        }

        const RunConfig config = load_run_config(config_path);
        const AliasMap aliases = load_configured_aliases(config);

        if (analyze->parsed()) {
            const CohortSpec& cohort = config.cohort_by_label(cohort_label);
            std::vector<CohortMetrics> rows{analyze_cohort(cohort, config, aliases)};
            emit(render_cohort_tables(rows, format), out_path);
            return 0;
        }
        if (compare->parsed()) {
            emit(render_cohort_tables(analyze_all(config, aliases), format), out_path);
            return 0;
        }
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
