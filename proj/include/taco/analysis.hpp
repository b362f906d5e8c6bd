#pragma once

#include "taco/prompting.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace taco {

enum class Severity { Fatal, Warning };

struct Violation {
    std::string code;      ///< e.g. KW_MISSING_LABEL
    std::string location;  ///< e.g. "step 3, label 12" or "line 40"
    std::string message;
    Severity severity = Severity::Fatal;
};

struct ViolationReport {
    std::vector<Violation> violations;

    void fatal(std::string code, std::string location, std::string message);
    void warning(std::string code, std::string location, std::string message);
    bool has_fatal() const;
    std::size_t count(std::string_view code) const;
    std::size_t fatal_count() const;
    std::size_t warning_count() const;
    nlohmann::json to_json() const;
};

/// The analysis is present iff the report holds no fatal violation.
template <typename T>
struct ParseResult {
    std::optional<T> analysis;
    ViolationReport report;
};

struct KeywordMeaning {
    std::string keyword;
    std::string meaning;
    bool operator==(const KeywordMeaning&) const = default;
};

struct Theme {
    std::string title;
    std::string description;  ///< optional "Description:" line
    bool operator==(const Theme&) const = default;
};

struct ThemeAssignment {
    int theme = 0;
    std::string reason;
    bool operator==(const ThemeAssignment&) const = default;
};

struct KeywordAnalysis {
    std::map<int, KeywordMeaning> meanings;
    std::map<int, Theme> themes;
    std::map<int, ThemeAssignment> assignments;

    bool operator==(const KeywordAnalysis&) const = default;
    nlohmann::json to_json() const;
    static KeywordAnalysis from_json(const nlohmann::json& j);
};

struct PosLabel {
    std::string word;
    std::string pos;
    bool operator==(const PosLabel&) const = default;
};

struct ContentCollocate {
    int label = 0;
    std::string word;
    std::string pos;
    bool operator==(const ContentCollocate&) const = default;
};

struct Quote {
    std::string text;    ///< straight quotes, whitespace collapsed, no surrounding quote marks
    std::string source;  ///< e.g. "summary 2", "meaning 14", "reason 7"
    bool operator==(const Quote&) const = default;
};

struct CollocateSummary {
    std::string title;
    std::string body;
    std::vector<Quote> quotes;
    bool operator==(const CollocateSummary&) const = default;
};

struct CollocateAnalysis {
    std::map<int, PosLabel> pos_labels;
    std::vector<ContentCollocate> content_list;
    std::vector<CollocateSummary> summaries;

    bool operator==(const CollocateAnalysis&) const = default;
    nlohmann::json to_json() const;
    static CollocateAnalysis from_json(const nlohmann::json& j);
};

enum class Mark { Yes, No };

struct Verdict {
    Mark mark = Mark::No;
    std::string reason;
    std::string line_text;
    bool operator==(const Verdict&) const = default;
};

struct ConcordanceAnalysis {
    std::map<int, Verdict> verdicts;

    std::set<int> yes_lines() const;
    bool operator==(const ConcordanceAnalysis&) const = default;
    nlohmann::json to_json() const;
    static ConcordanceAnalysis from_json(const nlohmann::json& j);
};

/// Content parts of speech accepted in a collocate content list.
bool is_content_pos(std::string_view pos);

ParseResult<KeywordAnalysis> parse_keyword_analysis(std::string_view text, int expected_k);
ParseResult<CollocateAnalysis> parse_collocate_analysis(std::string_view text,
                                                        const std::vector<std::string>& input_collocates);
ParseResult<ConcordanceAnalysis> parse_concordance_analysis(std::string_view text, int expected_n);

/// Canonical output-format rendering; parsing it yields an equal analysis.
std::string render_keyword_analysis(const KeywordAnalysis& analysis);

/// Double-quoted spans of at least `min_words` words.
std::vector<Quote> extract_quotes(std::string_view body, const std::string& source, std::size_t min_words = 4);
std::vector<Quote> extract_quotes(const KeywordAnalysis& analysis);
std::vector<Quote> extract_quotes(const CollocateAnalysis& analysis);
std::vector<Quote> extract_quotes(const ConcordanceAnalysis& analysis);

/// Versioned envelope: {"format":"taco-analysis","version":1,"task":...,"analysis":...|null,"violations":[...]}.
template <typename T>
nlohmann::json analysis_envelope(TaskKind task, const ParseResult<T>& result) {
    return {{"format", "taco-analysis"},
            {"version", 1},
            {"task", to_string(task)},
            {"analysis", result.analysis ? result.analysis->to_json() : nlohmann::json(nullptr)},
            {"violations", result.report.to_json()}};
}

}  // namespace taco
