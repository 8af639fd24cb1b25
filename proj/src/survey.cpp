#include "miner/survey.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include <json.hpp>

#include "miner/errors.hpp"
#include "miner/text.hpp"

namespace miner {

LikertSummary likert_summary(const LikertSample& sample, double trim_fraction) {
    const std::size_t n = sample.values.size();
    if (n == 0)
        throw EmptySampleError("question \"" + sample.question_id + "\" has an empty sample");
    if (!(trim_fraction >= 0.0 && trim_fraction < 0.5))
        throw ValidationError("trim fraction must lie in [0, 0.5)");
    for (int v : sample.values)
        if (v < 1 || v > 5)
            throw ValidationError("question \"" + sample.question_id + "\": answer " +
                                  std::to_string(v) + " outside the 5-point scale");

    std::uint64_t sum = 0, sum_sq = 0;
    for (int v : sample.values) {
        sum += static_cast<std::uint64_t>(v);
        sum_sq += static_cast<std::uint64_t>(v) * static_cast<std::uint64_t>(v);
    }

    LikertSummary s;
    s.mean = static_cast<double>(sum) / static_cast<double>(n);
    if (n > 1) {
        const long double ls = static_cast<long double>(sum);
        const long double centered =
            static_cast<long double>(sum_sq) - ls * ls / static_cast<long double>(n);
        s.stdev = centered > 0
                      ? static_cast<double>(sqrtl(centered / static_cast<long double>(n - 1)))
                      : 0.0;
    }

    std::vector<int> sorted = sample.values;
    std::sort(sorted.begin(), sorted.end());

    const auto k = static_cast<std::size_t>(std::floor(trim_fraction * static_cast<double>(n)));
    std::uint64_t trimmed_sum = 0;
    for (std::size_t i = k; i < n - k; ++i) trimmed_sum += static_cast<std::uint64_t>(sorted[i]);
    s.trimmed_mean_10 = static_cast<double>(trimmed_sum) / static_cast<double>(n - 2 * k);

    s.median = n % 2 == 1 ? static_cast<double>(sorted[n / 2])
                          : (static_cast<double>(sorted[n / 2 - 1]) +
                             static_cast<double>(sorted[n / 2])) /
                                2.0;
    s.range = static_cast<double>(sorted.back() - sorted.front());
    return s;
}

namespace {

double interpolated_quantile(const std::vector<double>& sorted, double p) {
    const std::size_t n = sorted.size();
    const double position = p * static_cast<double>(n - 1);
    const auto lower = static_cast<std::size_t>(position);
    if (lower + 1 >= n) return sorted[n - 1];
    const double fraction = position - static_cast<double>(lower);
    return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

}  // namespace

BoxplotStats boxplot_stats(std::vector<double> values) {
    if (values.empty()) throw EmptySampleError("box plot needs at least one value");
    std::sort(values.begin(), values.end());

    BoxplotStats s;
    s.q1 = interpolated_quantile(values, 0.25);
    s.median = interpolated_quantile(values, 0.50);
    s.q3 = interpolated_quantile(values, 0.75);

    const double iqr = s.q3 - s.q1;
    const double fence_low = s.q1 - 1.5 * iqr;
    const double fence_high = s.q3 + 1.5 * iqr;

    bool have_inside = false;
    for (double v : values) {
        if (v < fence_low || v > fence_high) {
            s.outliers.push_back(v);
            continue;
        }
        if (!have_inside) {
            s.whisker_low = v;
            have_inside = true;
        }
        s.whisker_high = v;
    }
    double sum = 0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    return s;
}

ChoiceTally choice_tally(const std::string& question_id,
                         const std::vector<std::set<std::string>>& responses,
                         const std::vector<std::string>& options) {
    ChoiceTally tally;
    tally.question_id = question_id;
    tally.respondents = responses.size();
    for (const std::string& option : options) tally.counts.emplace_back(option, 0);

    for (const auto& selection : responses) {
        for (const std::string& label : selection) {
            auto it = std::find_if(tally.counts.begin(), tally.counts.end(),
                                   [&](const auto& c) { return c.first == label; });
            if (it == tally.counts.end())
                throw ValidationError("question \"" + question_id + "\": unknown answer option \"" +
                                      label + "\"");
            ++it->second;
        }
    }
    return tally;
}

namespace {

std::vector<std::string> parse_delimited_row(const std::string& line, char delimiter,
                                             const std::string& where) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && cell.empty()) {
            quoted = true;
        } else if (c == delimiter) {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) throw ValidationError(where + ": unterminated quoted cell");
    cells.push_back(std::move(cell));
    return cells;
}

QuestionKind kind_from_string(const std::string& s, const std::string& where) {
    if (s == "likert") return QuestionKind::likert;
    if (s == "choice") return QuestionKind::choice;
    if (s == "text") return QuestionKind::text;
    throw ValidationError(where + ": unknown question kind \"" + s +
                          "\" (expected likert, choice, or text)");
}

}  // namespace

SurveyData parse_survey(std::istream& table, std::string_view questions_json,
                        const std::string& table_name, const std::string& questions_name) {
    using nlohmann::json;
    json doc = json::parse(questions_json, nullptr, false);
    if (doc.is_discarded() || !doc.is_object())
        throw ValidationError(questions_name + ": not a valid JSON object");

    char delimiter = ',';
    if (auto it = doc.find("delimiter"); it != doc.end()) {
        if (!it->is_string() || it->get<std::string>().size() != 1)
            throw ValidationError(questions_name + ": delimiter must be a single character");
        delimiter = it->get<std::string>()[0];
    }
    bool has_header = false;
    if (auto it = doc.find("has_header"); it != doc.end()) {
        if (!it->is_boolean()) throw ValidationError(questions_name + ": has_header must be a boolean");
        has_header = it->get<bool>();
    }

    SurveyData data;
    auto questions = doc.find("questions");
    if (questions == doc.end() || !questions->is_array() || questions->empty())
        throw ValidationError(questions_name + ": needs a non-empty \"questions\" array");
    for (std::size_t i = 0; i < questions->size(); ++i) {
        const json& q = (*questions)[i];
        const std::string where = questions_name + ": questions[" + std::to_string(i) + "]";
        if (!q.is_object()) throw ValidationError(where + ": expected an object");
        SurveyQuestion question;
        if (!q.contains("id") || !q["id"].is_string())
            throw ValidationError(where + ": needs a string \"id\"");
        question.id = q["id"].get<std::string>();
        question.prompt = q.value("prompt", "");
        if (!q.contains("kind") || !q["kind"].is_string())
            throw ValidationError(where + ": needs a string \"kind\"");
        question.kind = kind_from_string(q["kind"].get<std::string>(), where);
        if (!q.contains("column") || !q["column"].is_number_unsigned())
            throw ValidationError(where + ": needs a non-negative integer \"column\"");
        question.column = q["column"].get<std::size_t>();
        if (question.kind == QuestionKind::choice) {
            if (!q.contains("options") || !q["options"].is_array() || q["options"].empty())
                throw ValidationError(where + ": choice questions need an \"options\" array");
            for (const json& option : q["options"]) {
                if (!option.is_string()) throw ValidationError(where + ": options must be strings");
                const std::string label = option.get<std::string>();
                if (std::find(question.options.begin(), question.options.end(), label) !=
                    question.options.end())
                    throw ValidationError(where + ": duplicate option \"" + label + "\"");
                question.options.push_back(label);
            }
        }
        data.questions.push_back(std::move(question));
    }

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(table, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (has_header && lineno == 1) continue;
        if (line.empty()) continue;
        data.rows.push_back(
            parse_delimited_row(line, delimiter, table_name + ":" + std::to_string(lineno)));
    }

    // Validate every answered cell now, while line numbers are still known.
    const std::size_t header_offset = has_header ? 1 : 0;
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
        const auto& row = data.rows[r];
        const std::string where = table_name + ":" + std::to_string(r + 1 + header_offset);
        for (const SurveyQuestion& q : data.questions) {
            if (q.column >= row.size()) continue;  // short row = missing answers
            const std::string cell(trim(row[q.column]));
            if (cell.empty()) continue;
            if (q.kind == QuestionKind::likert) {
                int v = 0;
                auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
                if (ec != std::errc{} || ptr != cell.data() + cell.size() || v < 1 || v > 5)
                    throw ValidationError(where + ": answer \"" + cell + "\" to question \"" +
                                          q.id + "\" is not an integer in [1, 5]");
            } else if (q.kind == QuestionKind::choice) {
                for (std::string_view token : split(cell, ';')) {
                    const std::string label(trim(token));
                    if (label.empty()) continue;
                    if (std::find(q.options.begin(), q.options.end(), label) == q.options.end())
                        throw ValidationError(where + ": unknown answer option \"" + label +
                                              "\" for question \"" + q.id + "\"");
                }
            }
        }
    }
    return data;
}

SurveyData load_survey(const std::string& table_path, const std::string& questions_path) {
    std::ifstream table(table_path);
    if (!table) throw IoError("cannot open survey table \"" + table_path + "\"");
    std::ifstream questions(questions_path);
    if (!questions) throw IoError("cannot open question config \"" + questions_path + "\"");
    std::ostringstream qbuf;
    qbuf << questions.rdbuf();
    return parse_survey(table, qbuf.str(), table_path, questions_path);
}

LikertSample SurveyData::likert_sample(const SurveyQuestion& q) const {
    LikertSample sample;
    sample.question_id = q.id;
    for (const auto& row : rows) {
        if (q.column >= row.size()) continue;
        const std::string cell(trim(row[q.column]));
        if (cell.empty()) continue;
        int v = 0;
        std::from_chars(cell.data(), cell.data() + cell.size(), v);
        sample.values.push_back(v);
    }
    return sample;
}

std::vector<std::set<std::string>> SurveyData::choice_responses(const SurveyQuestion& q) const {
    std::vector<std::set<std::string>> responses;
    for (const auto& row : rows) {
        std::set<std::string> selection;
        if (q.column < row.size()) {
            for (std::string_view token : split(row[q.column], ';')) {
                const std::string label(trim(token));
                if (!label.empty()) selection.insert(label);
            }
        }
        responses.push_back(std::move(selection));
    }
    return responses;
}

std::vector<std::string> SurveyData::text_answers(const SurveyQuestion& q) const {
    std::vector<std::string> answers;
    for (const auto& row : rows) {
        if (q.column >= row.size()) continue;
        const std::string cell(trim(row[q.column]));
        if (!cell.empty()) answers.push_back(cell);
    }
    return answers;
}

}  // namespace miner
