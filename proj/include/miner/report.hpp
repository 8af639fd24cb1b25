#pragma once

#include <optional>
#include <string>
#include <vector>

#include "miner/metrics.hpp"
#include "miner/survey.hpp"

namespace miner {

enum class TableFormat { markdown, csv, machine };

TableFormat table_format_from_string(const std::string& name);

/// A rendered comparison table: a label column (plus an optional sub-label
/// column), numeric columns with per-column decimal places, and footnotes.
struct Table {
    struct Column {
        std::string header;
        int decimals = 1;
    };
    struct Row {
        std::string label;
        std::optional<std::string> sublabel;
        bool kanban = false;
        std::vector<std::optional<double>> cells;  // absent renders as "–"
    };

    std::string title;
    std::string label_header;
    std::optional<std::string> sublabel_header;
    std::vector<Column> columns;
    std::vector<Row> rows;
    std::vector<std::string> footnotes;
};

/// Rounds half-up on the decimal representation (0.05 -> "0.1", 2.675 ->
/// "2.68"), unlike printf's round-half-even on the binary value. Applied only
/// at render time; stored metrics are never pre-rounded.
std::string format_fixed_halfup(double value, int places);

/// Shortest decimal string that parses back to exactly the same double.
std::string format_shortest(double value);

std::string render_table(const Table& table, TableFormat format);

/// Rebuilds rows (label, sublabel, kanban, cells) from machine-format text;
/// numeric cells round-trip exactly.
Table parse_machine(const std::string& text);

/// The three cohort comparison tables. Rows render with one decimal place
/// (the issue table's percent column as an integer); kanban cohorts get a
/// "*" suffix.
Table make_commit_table(const std::vector<CohortMetrics>& rows);
Table make_issue_table(const std::vector<CohortMetrics>& rows);
Table make_text_table(const std::vector<CohortMetrics>& rows);

std::string render_commit_table(const std::vector<CohortMetrics>& rows, TableFormat format);
std::string render_issue_table(const std::vector<CohortMetrics>& rows, TableFormat format);
std::string render_text_table(const std::vector<CohortMetrics>& rows, TableFormat format);

/// Survey tables: Likert summaries (two decimals), box-plot five-number
/// summaries, and one tally table per multiple-choice question.
struct LikertRow {
    std::string id;
    std::string topic;
    std::uint64_t respondents = 0;
    LikertSummary summary;
};

Table make_likert_table(const std::vector<LikertRow>& rows);
std::string render_likert_table(const std::vector<LikertRow>& rows, TableFormat format);

struct BoxplotRow {
    std::string id;
    std::string topic;
    BoxplotStats stats;
};

Table make_boxplot_table(const std::vector<BoxplotRow>& rows);
Table make_choice_table(const ChoiceTally& tally, const std::string& prompt);

}  // namespace miner
