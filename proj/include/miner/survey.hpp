#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace miner {

/// Raw answers to one 5-point Likert question (1 = strong no, 5 = strong yes).
struct LikertSample {
    std::string question_id;
    std::vector<int> values;  // each in [1, 5]
};

/// The five Likert summary columns.
struct LikertSummary {
    double mean = 0;
    double stdev = 0;
    double trimmed_mean_10 = 0;
    double median = 0;
    double range = 0;

    bool operator==(const LikertSummary&) const = default;
};

/// Five-number box-plot summary with 1.5-IQR whiskers; whiskers snap to the
/// most extreme data points inside the fences, points beyond them are
/// outliers, and the sample mean is carried for the cross marker.
struct BoxplotStats {
    double q1 = 0;
    double median = 0;
    double q3 = 0;
    double whisker_low = 0;
    double whisker_high = 0;
    std::vector<double> outliers;
    double mean = 0;

    bool operator==(const BoxplotStats&) const = default;
};

/// Per-option counts of a multiple-choice question; respondents may select
/// any number of options, so counts can sum past the respondent count.
struct ChoiceTally {
    std::string question_id;
    std::vector<std::pair<std::string, std::uint64_t>> counts;  // in option order
    std::uint64_t respondents = 0;
};

/// Mean, sample stdev, floor-rule trimmed mean, median, and range of a
/// Likert sample. Throws EmptySampleError for an empty sample, ValidationError
/// for values outside [1,5] or a trim fraction outside [0, 0.5).
LikertSummary likert_summary(const LikertSample& sample, double trim_fraction = 0.10);

/// Quartiles by linear interpolation of order statistics (position p*(n-1),
/// zero-indexed), matching the documented cross-language convention.
/// Throws EmptySampleError on empty input.
BoxplotStats boxplot_stats(std::vector<double> values);

/// Tallies multiple-choice selections. Every selected label must appear in
/// `options`; unknown labels raise ValidationError naming the label.
ChoiceTally choice_tally(const std::string& question_id,
                         const std::vector<std::set<std::string>>& responses,
                         const std::vector<std::string>& options);

/// One parsed survey column with its per-respondent cells (blank = missing).
enum class QuestionKind { likert, choice, text };

struct SurveyQuestion {
    std::string id;
    std::string prompt;
    QuestionKind kind = QuestionKind::likert;
    std::vector<std::string> options;  // choice questions only
    std::size_t column = 0;            // zero-based column in the table
};

struct SurveyData {
    std::vector<SurveyQuestion> questions;
    std::vector<std::vector<std::string>> rows;  // one per respondent, raw cells

    /// Likert answers for a question; blank cells are excluded.
    LikertSample likert_sample(const SurveyQuestion& q) const;
    /// Selected options per respondent (blank cell = empty selection).
    std::vector<std::set<std::string>> choice_responses(const SurveyQuestion& q) const;
    /// Non-blank free-text answers.
    std::vector<std::string> text_answers(const SurveyQuestion& q) const;
};

/// Loads the delimiter-separated response table plus its sidecar question
/// config (JSON). Multiple selections within a choice cell are separated by
/// ';'. Parse errors carry file names and line numbers.
SurveyData load_survey(const std::string& table_path, const std::string& questions_path);
SurveyData parse_survey(std::istream& table, std::string_view questions_json,
                        const std::string& table_name = "<survey>",
                        const std::string& questions_name = "<questions>");

}  // namespace miner
