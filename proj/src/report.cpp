#include "miner/report.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

namespace {

// The en dash used for cells of cohorts with an empty selection.
constexpr const char* kEmptyCell = "–";

constexpr const char* kKanbanFootnote = "Courses marked with * employed Kanban.";

}  // namespace

TableFormat table_format_from_string(const std::string& name) {
    if (name == "markdown") return TableFormat::markdown;
    if (name == "csv") return TableFormat::csv;
    if (name == "machine") return TableFormat::machine;
    throw ValidationError("unknown format \"" + name + "\" (expected markdown, csv, or machine)");
}

std::string format_fixed_halfup(double value, int places) {
    if (!std::isfinite(value)) return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");

    char buf[512];
    auto result = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed);
    std::string s(buf, result.ptr);

    const bool negative = !s.empty() && s[0] == '-';
    if (negative) s.erase(0, 1);

    std::string int_part, frac_part;
    if (auto dot = s.find('.'); dot == std::string::npos) {
        int_part = s;
    } else {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
    }

    const auto p = static_cast<std::size_t>(places);
    if (frac_part.size() <= p) {
        frac_part.append(p - frac_part.size(), '0');
    } else {
        const bool round_up = frac_part[p] >= '5';
        frac_part.resize(p);
        if (round_up) {
            std::string digits = int_part + frac_part;
            int i = static_cast<int>(digits.size()) - 1;
            for (; i >= 0; --i) {
                if (digits[i] == '9') {
                    digits[i] = '0';
                } else {
                    ++digits[i];
                    break;
                }
            }
            if (i < 0) digits.insert(digits.begin(), '1');
            int_part = digits.substr(0, digits.size() - p);
            frac_part = digits.substr(digits.size() - p);
            if (int_part.empty()) int_part = "0";
        }
    }

    std::string out = int_part;
    if (places > 0) {
        out += '.';
        out += frac_part;
    }
    const bool nonzero = out.find_first_of("123456789") != std::string::npos;
    return negative && nonzero ? "-" + out : out;
}

std::string format_shortest(double value) {
    char buf[64];
    auto result = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, result.ptr);
}

namespace {

std::string row_label(const Table::Row& row) { return row.kanban ? row.label + "*" : row.label; }

std::string csv_quote(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string render_markdown(const Table& table) {
    std::string out;
    if (!table.title.empty()) out += table.title + "\n\n";

    std::vector<std::string> headers{table.label_header};
    if (table.sublabel_header) headers.push_back(*table.sublabel_header);
    for (const auto& c : table.columns) headers.push_back(c.header);
    for (std::size_t i = 0; i < headers.size(); ++i)
        out += (i == 0 ? "" : " | ") + headers[i];
    out += '\n';
    for (std::size_t i = 0; i < headers.size(); ++i) out += i == 0 ? "---" : " | ---";
    out += '\n';

    for (const auto& row : table.rows) {
        out += row_label(row);
        if (table.sublabel_header) out += " | " + row.sublabel.value_or("");
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            const auto& cell = row.cells[i];
            out += " | ";
            out += cell ? format_fixed_halfup(*cell, table.columns[i].decimals) : kEmptyCell;
        }
        out += '\n';
    }
    for (const auto& note : table.footnotes) out += "\n" + note;
    if (!table.footnotes.empty()) out += '\n';
    return out;
}

std::string render_csv(const Table& table) {
    std::string out;
    if (!table.title.empty()) out += "# " + table.title + "\n";

    std::vector<std::string> headers{table.label_header};
    if (table.sublabel_header) headers.push_back(*table.sublabel_header);
    for (const auto& c : table.columns) headers.push_back(c.header);
    for (std::size_t i = 0; i < headers.size(); ++i)
        out += (i == 0 ? "" : ",") + csv_quote(headers[i]);
    out += '\n';

    for (const auto& row : table.rows) {
        out += csv_quote(row_label(row));
        if (table.sublabel_header) out += "," + csv_quote(row.sublabel.value_or(""));
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            const auto& cell = row.cells[i];
            out += ',';
            out += cell ? format_fixed_halfup(*cell, table.columns[i].decimals) : kEmptyCell;
        }
        out += '\n';
    }
    for (const auto& note : table.footnotes) out += "# " + note + "\n";
    return out;
}

// gnuplot-friendly: '#' metadata lines, tab-separated data columns, full
// precision values. parse_machine() reads this back exactly.
std::string render_machine(const Table& table) {
    std::string out = "# table: " + table.title + "\n";
    out += "# label: " + table.label_header;
    if (table.sublabel_header) out += "\t" + *table.sublabel_header;
    out += '\n';
    out += "# columns: kanban";
    for (const auto& c : table.columns) out += "\t" + c.header;
    out += '\n';
    for (const auto& row : table.rows) {
        out += row.label;
        if (table.sublabel_header) out += "\t" + row.sublabel.value_or("");
        out += row.kanban ? "\t1" : "\t0";
        for (const auto& cell : row.cells) {
            out += '\t';
            out += cell ? format_shortest(*cell) : "-";
        }
        out += '\n';
    }
    for (const auto& note : table.footnotes) out += "# note: " + note + "\n";
    return out;
}

}  // namespace

std::string render_table(const Table& table, TableFormat format) {
    switch (format) {
        case TableFormat::markdown: return render_markdown(table);
        case TableFormat::csv: return render_csv(table);
        case TableFormat::machine: return render_machine(table);
    }
    throw ValidationError("unreachable table format");
}

Table parse_machine(const std::string& text) {
    Table table;
    bool has_sublabel = false;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line.starts_with("# table: ")) {
            table.title = line.substr(9);
            continue;
        }
        if (line.starts_with("# label: ")) {
            auto parts = split(std::string_view(line).substr(9), '\t');
            table.label_header = std::string(parts[0]);
            if (parts.size() > 1) {
                table.sublabel_header = std::string(parts[1]);
                has_sublabel = true;
            }
            continue;
        }
        if (line.starts_with("# columns: ")) {
            auto parts = split(std::string_view(line).substr(11), '\t');
            for (std::size_t i = 1; i < parts.size(); ++i)  // parts[0] is "kanban"
                table.columns.push_back({std::string(parts[i]), -1});
            continue;
        }
        if (line.starts_with("#")) continue;

        auto parts = split(line, '\t');
        const std::size_t fixed = has_sublabel ? 3 : 2;
        if (parts.size() < fixed)
            throw ParseError(lineno, "machine table row with too few columns");
        Table::Row row;
        row.label = std::string(parts[0]);
        std::size_t next = 1;
        if (has_sublabel) row.sublabel = std::string(parts[next++]);
        row.kanban = parts[next] == "1";
        ++next;
        for (std::size_t i = next; i < parts.size(); ++i) {
            if (parts[i] == "-") {
                row.cells.push_back(std::nullopt);
                continue;
            }
            double v = 0;
            auto [ptr, ec] = std::from_chars(parts[i].data(), parts[i].data() + parts[i].size(), v);
            if (ec != std::errc{} || ptr != parts[i].data() + parts[i].size())
                throw ParseError(lineno, "malformed numeric cell \"" + std::string(parts[i]) + "\"");
            row.cells.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

void add_empty_selection_footnote(Table& table) {
    for (const auto& row : table.rows)
        for (const auto& cell : row.cells)
            if (!cell) {
                table.footnotes.push_back(std::string(kEmptyCell) +
                                          " marks cohorts with no study issues in the window.");
                return;
            }
}

}  // namespace

Table make_commit_table(const std::vector<CohortMetrics>& rows) {
    if (rows.empty()) throw ValidationError("commit table needs at least one cohort row");
    Table table;
    table.title = "Comparison of commit attributes";
    table.label_header = "Course year";
    table.columns = {{"Commit amount", 1},
                     {"Touched files", 1},
                     {"Last-minute commits", 1},
                     {"Line changes per commit", 1},
                     {"Unique issues referenced", 1}};
    for (const CohortMetrics& m : rows) {
        Table::Row row;
        row.label = m.cohort_label;
        row.kanban = m.kanban_flag;
        row.cells = {m.commit.commit_amount, m.commit.touched_files, m.commit.last_minute_commits,
                     m.commit.line_changes_per_commit, m.commit.unique_issues_referenced};
        table.rows.push_back(std::move(row));
    }
    table.footnotes.push_back(kKanbanFootnote);
    table.footnotes.push_back("All values stated normalized by course participant count.");
    return table;
}

Table make_issue_table(const std::vector<CohortMetrics>& rows) {
    if (rows.empty()) throw ValidationError("issue table needs at least one cohort row");
    Table table;
    table.title = "Comparison of issues and their attributes";
    table.label_header = "Course year";
    table.columns = {{"Issue amount", 1},
                     {"Issue events", 1},
                     {"Issue comments", 1},
                     {"% issues opened & closed by same person", 0}};
    for (const CohortMetrics& m : rows) {
        Table::Row row;
        row.label = m.cohort_label;
        row.kanban = m.kanban_flag;
        row.cells = {m.issue.issue_amount, m.issue.issue_events, m.issue.issue_comments,
                     std::optional<double>{}};
        if (!m.provenance.issues_empty) row.cells[3] = m.issue.pct_same_open_close;
        table.rows.push_back(std::move(row));
    }
    table.footnotes.push_back(kKanbanFootnote);
    table.footnotes.push_back("Counts are means per contributor.");
    add_empty_selection_footnote(table);
    return table;
}

Table make_text_table(const std::vector<CohortMetrics>& rows) {
    if (rows.empty()) throw ValidationError("text table needs at least one cohort row");
    Table table;
    table.title = "Issue body and title length";
    table.label_header = "Course year";
    table.columns = {{"Body mean", 1},   {"Body stdev", 1},  {"Body median", 1},
                     {"Title mean", 1},  {"Title stdev", 1}, {"Title median", 1}};
    for (const CohortMetrics& m : rows) {
        Table::Row row;
        row.label = m.cohort_label;
        row.kanban = m.kanban_flag;
        if (m.text) {
            row.cells = {m.text->body.mean,  m.text->body.stdev,  m.text->body.median,
                         m.text->title.mean, m.text->title.stdev, m.text->title.median};
        } else {
            row.cells.assign(6, std::nullopt);
        }
        table.rows.push_back(std::move(row));
    }
    table.footnotes.push_back(kKanbanFootnote);
    add_empty_selection_footnote(table);
    return table;
}

std::string render_commit_table(const std::vector<CohortMetrics>& rows, TableFormat format) {
    return render_table(make_commit_table(rows), format);
}

std::string render_issue_table(const std::vector<CohortMetrics>& rows, TableFormat format) {
    return render_table(make_issue_table(rows), format);
}

std::string render_text_table(const std::vector<CohortMetrics>& rows, TableFormat format) {
    return render_table(make_text_table(rows), format);
}

Table make_likert_table(const std::vector<LikertRow>& rows) {
    Table table;
    table.title = "5-point Likert scale questions";
    table.label_header = "#";
    table.sublabel_header = "Question Topic";
    table.columns = {{"Mean", 2}, {"Std. Dev.", 2}, {"10% Trim. Mean", 2}, {"Median", 2},
                     {"Range", 2}};
    for (const LikertRow& r : rows) {
        Table::Row row;
        row.label = r.id;
        row.sublabel = r.topic + " (N=" + std::to_string(r.respondents) + ")";
        row.cells = {r.summary.mean, r.summary.stdev, r.summary.trimmed_mean_10, r.summary.median,
                     r.summary.range};
        table.rows.push_back(std::move(row));
    }
    table.footnotes.push_back("Scale: 1 = strong no, 3 = neutral, 5 = strong yes.");
    return table;
}

std::string render_likert_table(const std::vector<LikertRow>& rows, TableFormat format) {
    return render_table(make_likert_table(rows), format);
}

Table make_boxplot_table(const std::vector<BoxplotRow>& rows) {
    Table table;
    table.title = "Box plot summary";
    table.label_header = "#";
    table.sublabel_header = "Question Topic";
    table.columns = {{"Whisker low", 2}, {"Q1", 2},   {"Median", 2},  {"Q3", 2},
                     {"Whisker high", 2}, {"Mean", 2}, {"Outliers", 0}};
    for (const BoxplotRow& r : rows) {
        Table::Row row;
        row.label = r.id;
        row.sublabel = r.topic;
        row.cells = {r.stats.whisker_low,  r.stats.q1,   r.stats.median,
                     r.stats.q3,           r.stats.whisker_high, r.stats.mean,
                     static_cast<double>(r.stats.outliers.size())};
        table.rows.push_back(std::move(row));
    }
    table.footnotes.push_back(
        "Whiskers extend to the most extreme data points within 1.5 interquartile ranges of the "
        "box; points beyond them are outliers.");
    return table;
}

Table make_choice_table(const ChoiceTally& tally, const std::string& prompt) {
    Table table;
    table.title = "Question " + tally.question_id +
                  (prompt.empty() ? "" : ": " + prompt) +
                  " (N=" + std::to_string(tally.respondents) + ")";
    table.label_header = "Answer choice";
    table.columns = {{"Count", 0}};
    for (const auto& [option, count] : tally.counts) {
        Table::Row row;
        row.label = option;
        row.cells = {static_cast<double>(count)};
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace miner
