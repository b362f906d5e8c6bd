#include "taco/analysis.hpp"

#include "taco/error.hpp"
#include "taco/text.hpp"

#include <algorithm>
#include <cctype>

namespace taco {

using nlohmann::json;

void ViolationReport::fatal(std::string code, std::string location, std::string message) {
    violations.push_back({std::move(code), std::move(location), std::move(message), Severity::Fatal});
}

void ViolationReport::warning(std::string code, std::string location, std::string message) {
    violations.push_back({std::move(code), std::move(location), std::move(message), Severity::Warning});
}

bool ViolationReport::has_fatal() const { return fatal_count() > 0; }

std::size_t ViolationReport::count(std::string_view code) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; }));
}

std::size_t ViolationReport::fatal_count() const {
    return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                  [](const Violation& v) { return v.severity == Severity::Fatal; }));
}

std::size_t ViolationReport::warning_count() const { return violations.size() - fatal_count(); }

json ViolationReport::to_json() const {
    json out = json::array();
    for (const auto& v : violations) {
        out.push_back({{"code", v.code},
                       {"severity", v.severity == Severity::Fatal ? "fatal" : "warning"},
                       {"location", v.location},
                       {"message", v.message}});
    }
    return out;
}

namespace {

bool iequals(std::string_view a, std::string_view b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i]))) return false;
    }
    return true;
}

bool istarts_with(std::string_view s, std::string_view prefix) {
    return s.size() >= prefix.size() && iequals(s.substr(0, prefix.size()), prefix);
}

void erase_all(std::string& s, std::string_view needle) {
    for (auto pos = s.find(needle); pos != std::string::npos; pos = s.find(needle, pos)) s.erase(pos, needle.size());
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
            pending_space = !out.empty();
        } else {
            if (pending_space) out.push_back(' ');
            pending_space = false;
            out.push_back(c);
        }
    }
    return out;
}

// Markup-insensitive view of one output line: bold markers, header hashes and
// list bullets removed, quotes straightened.
std::string normalize_line(std::string_view raw) {
    std::string s = straighten_quotes(raw);
    erase_all(s, "**");
    std::string_view v = trim(s);
    while (!v.empty() && v.front() == '#') v.remove_prefix(1);
    v = trim(v);
    while (v.size() >= 2 && (v[0] == '-' || v[0] == '*') && (v[1] == ' ' || v[1] == '\t')) v = trim(v.substr(2));
    if (v == "-" || v == "*") v = {};
    return std::string(v);
}

struct Label {
    int number = 0;
    std::string rest;
};

// "<keyword> [#]N[:.)] rest", keyword matched case-insensitively.
std::optional<Label> match_label(std::string_view line, std::string_view keyword) {
    if (!istarts_with(line, keyword)) return std::nullopt;
    std::size_t i = keyword.size();
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && line[i] == '#') ++i;
    const std::size_t digits_begin = i;
    while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])) != 0) ++i;
    if (i == digits_begin || i - digits_begin > 6) return std::nullopt;
    if (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i])) != 0) return std::nullopt;
    Label out;
    out.number = std::stoi(std::string(line.substr(digits_begin, i - digits_begin)));
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i < line.size() && (line[i] == ':' || line[i] == '.' || line[i] == ')')) ++i;
    out.rest = std::string(trim(line.substr(i)));
    return out;
}

// "<name>: text"
std::optional<std::string> match_field(std::string_view line, std::string_view name) {
    if (!istarts_with(line, name)) return std::nullopt;
    auto rest = trim(line.substr(name.size()));
    if (rest.empty() || rest.front() != ':') return std::nullopt;
    return std::string(trim(rest.substr(1)));
}

void append_text(std::string& field, std::string_view more) {
    if (!field.empty()) field.push_back(' ');
    field.append(more);
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no); }

struct Line {
    std::size_t number;
    std::string text;
    bool table;
};

std::vector<Line> normalized_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t n = 0;
    for (auto raw : split_lines(text)) {
        ++n;
        auto norm = normalize_line(raw);
        const bool table = !norm.empty() && norm.front() == '|';
        out.push_back({n, std::move(norm), table});
    }
    return out;
}

std::optional<int> step_header(const std::string& line) {
    auto m = match_label(line, "step");
    if (!m) return std::nullopt;
    return m->number;
}

}  // namespace

// ---------------------------------------------------------------- keyword

ParseResult<KeywordAnalysis> parse_keyword_analysis(std::string_view text, int expected_k) {
    if (expected_k <= 0) throw validation_error("BAD_EXPECTED_COUNT", "expected keyword count must be positive");
    ParseResult<KeywordAnalysis> result;
    auto& report = result.report;
    KeywordAnalysis a;

    int step = 0;
    std::string* open_field = nullptr;
    std::optional<int> step1_label;
    std::optional<int> theme_label;
    std::optional<int> step3_label;
    std::map<std::string, int> first_label_of_word;
    std::set<int> seen_step1;
    std::set<int> seen_step3;
    bool table_reported = false;

    for (const auto& line : normalized_lines(text)) {
        if (line.text.empty()) continue;
        if (line.table) {
            if (!table_reported) report.fatal("KW_TABLE", at_line(line.number), "markdown table is outside the output format");
            table_reported = true;
            open_field = nullptr;
            continue;
        }
        if (auto s = step_header(line.text)) {
            step = *s;
            open_field = nullptr;
            step1_label.reset();
            theme_label.reset();
            step3_label.reset();
            continue;
        }
        const auto loc = "step " + std::to_string(step) + ", " + at_line(line.number);
        if (step == 1) {
            if (auto m = match_label(line.text, "keyword")) {
                open_field = nullptr;
                step1_label.reset();
                const auto word = to_lower(m->rest);
                if (auto [it, inserted] = first_label_of_word.emplace(word, m->number); !inserted) {
                    report.warning("KW_DUPLICATE_KEYWORD", loc,
                                   "keyword \"" + m->rest + "\" appears at labels " + std::to_string(it->second) + " and " +
                                       std::to_string(m->number));
                }
                if (m->number < 1 || m->number > expected_k) {
                    report.warning("KW_EXTRA_LABEL", loc,
                                   "label " + std::to_string(m->number) + " is outside 1.." + std::to_string(expected_k));
                    continue;
                }
                if (!seen_step1.insert(m->number).second) {
                    report.warning("KW_DUPLICATE_LABEL", loc, "label " + std::to_string(m->number) + " repeated in step 1");
                    continue;
                }
                a.meanings[m->number].keyword = m->rest;
                step1_label = m->number;
            } else if (auto f = match_field(line.text, "meaning")) {
                if (step1_label) {
                    auto& meaning = a.meanings[*step1_label].meaning;
                    meaning = *f;
                    open_field = &meaning;
                } else {
                    open_field = nullptr;
                }
            } else if (open_field != nullptr) {
                append_text(*open_field, line.text);
            }
        } else if (step == 2) {
            if (auto m = match_label(line.text, "theme")) {
                open_field = nullptr;
                theme_label.reset();
                if (a.themes.count(m->number) != 0) {
                    report.warning("KW_DUPLICATE_THEME", loc, "theme " + std::to_string(m->number) + " declared twice");
                    continue;
                }
                a.themes[m->number].title = m->rest;
                theme_label = m->number;
                open_field = &a.themes[m->number].title;
            } else if (auto f = match_field(line.text, "description")) {
                if (theme_label) {
                    auto& d = a.themes[*theme_label].description;
                    d = *f;
                    open_field = &d;
                }
            } else if (open_field != nullptr) {
                append_text(*open_field, line.text);
            }
        } else if (step == 3) {
            if (auto m = match_label(line.text, "keyword")) {
                open_field = nullptr;
                step3_label.reset();
                if (m->number < 1 || m->number > expected_k) {
                    report.warning("KW_EXTRA_LABEL", loc,
                                   "label " + std::to_string(m->number) + " is outside 1.." + std::to_string(expected_k));
                    continue;
                }
                if (!seen_step3.insert(m->number).second) {
                    report.fatal("KW_DUPLICATE_ASSIGNMENT", loc, "label " + std::to_string(m->number) + " assigned twice");
                    continue;
                }
                if (auto it = a.meanings.find(m->number); it != a.meanings.end() && !iequals(it->second.keyword, m->rest)) {
                    report.warning("KW_LABEL_MISMATCH", loc,
                                   "label " + std::to_string(m->number) + " is \"" + it->second.keyword +
                                       "\" in step 1 but \"" + m->rest + "\" in step 3");
                }
                a.assignments[m->number];
                step3_label = m->number;
            } else if (auto m = match_label(line.text, "theme")) {
                open_field = nullptr;
                if (!step3_label) continue;
                auto& asg = a.assignments[*step3_label];
                if (asg.theme != 0) {
                    report.fatal("KW_DUPLICATE_ASSIGNMENT", loc,
                                 "label " + std::to_string(*step3_label) + " assigned to more than one theme");
                    continue;
                }
                asg.theme = m->number;
            } else if (auto f = match_field(line.text, "reason")) {
                if (step3_label) {
                    auto& r = a.assignments[*step3_label].reason;
                    r = *f;
                    open_field = &r;
                }
            } else if (open_field != nullptr) {
                append_text(*open_field, line.text);
            }
        }
    }

    for (int k = 1; k <= expected_k; ++k) {
        const auto label = "label " + std::to_string(k);
        if (a.meanings.count(k) == 0) {
            report.fatal("KW_MISSING_LABEL", "step 1, " + label, "no meaning entry for " + label);
        } else if (a.meanings[k].meaning.empty()) {
            report.warning("KW_EMPTY_MEANING", "step 1, " + label, "empty meaning for " + label);
        }
        const auto it = a.assignments.find(k);
        if (it == a.assignments.end() || it->second.theme == 0) {
            report.fatal("KW_MISSING_ASSIGNMENT", "step 3, " + label, "no theme assigned to " + label);
        } else if (a.themes.count(it->second.theme) == 0) {
            report.fatal("KW_UNDECLARED_THEME", "step 3, " + label,
                         label + " is assigned to undeclared theme " + std::to_string(it->second.theme));
        }
    }

    if (!report.has_fatal()) result.analysis = std::move(a);
    return result;
}

std::string render_keyword_analysis(const KeywordAnalysis& a) {
    std::string out = "- Step 1:\n\n";
    for (const auto& [label, m] : a.meanings) {
        out += "- Keyword " + std::to_string(label) + ": " + m.keyword + "\n\n";
        out += "- Meaning: " + m.meaning + "\n\n";
    }
    out += "- Step 2:\n\n";
    for (const auto& [index, t] : a.themes) {
        out += "- Theme " + std::to_string(index) + ": " + t.title + "\n\n";
        if (!t.description.empty()) out += "- Description: " + t.description + "\n\n";
    }
    out += "- Step 3:\n\n";
    for (const auto& [label, asg] : a.assignments) {
        const auto it = a.meanings.find(label);
        out += "- Keyword " + std::to_string(label) + ": " + (it == a.meanings.end() ? "" : it->second.keyword) + "\n\n";
        out += "- Theme " + std::to_string(asg.theme) + "\n\n";
        out += "- Reason: " + asg.reason + "\n\n";
    }
    return out;
}

json KeywordAnalysis::to_json() const {
    json j{{"meanings", json::array()}, {"themes", json::array()}, {"assignments", json::array()}};
    for (const auto& [label, m] : meanings) j["meanings"].push_back({{"label", label}, {"keyword", m.keyword}, {"meaning", m.meaning}});
    for (const auto& [index, t] : themes) j["themes"].push_back({{"index", index}, {"title", t.title}, {"description", t.description}});
    for (const auto& [label, asg] : assignments) j["assignments"].push_back({{"label", label}, {"theme", asg.theme}, {"reason", asg.reason}});
    return j;
}

KeywordAnalysis KeywordAnalysis::from_json(const json& j) {
    KeywordAnalysis a;
    for (const auto& m : j.at("meanings")) a.meanings[m.at("label").get<int>()] = {m.at("keyword"), m.at("meaning")};
    for (const auto& t : j.at("themes")) a.themes[t.at("index").get<int>()] = {t.at("title"), t.value("description", "")};
    for (const auto& s : j.at("assignments")) a.assignments[s.at("label").get<int>()] = {s.at("theme").get<int>(), s.at("reason")};
    return a;
}

// ---------------------------------------------------------------- collocate

bool is_content_pos(std::string_view pos) {
    static const std::set<std::string, std::less<>> kContent{"noun", "proper noun", "adjective", "verb", "adverb"};
    return kContent.count(pos) != 0;
}

namespace {

std::string normalize_pos(std::string_view raw) {
    std::string pos = to_lower(raw);
    if (const auto paren = pos.find('('); paren != std::string::npos) pos.erase(paren);
    return collapse_whitespace(pos);
}

std::optional<PosLabel> split_word_pos(const std::string& rest) {
    const auto comma = rest.find(',');
    if (comma == std::string::npos) return std::nullopt;
    PosLabel p{std::string(trim(std::string_view(rest).substr(0, comma))), normalize_pos(std::string_view(rest).substr(comma + 1))};
    if (p.word.empty() || p.pos.empty()) return std::nullopt;
    return p;
}

}  // namespace

ParseResult<CollocateAnalysis> parse_collocate_analysis(std::string_view text,
                                                        const std::vector<std::string>& input_collocates) {
    ParseResult<CollocateAnalysis> result;
    auto& report = result.report;
    CollocateAnalysis a;

    int step = 0;
    std::set<int> steps_seen;
    std::set<int> content_labels;
    bool table_reported = false;
    std::vector<std::string> body_lines;

    const auto flush_summary = [&] {
        if (a.summaries.empty()) return;
        auto& s = a.summaries.back();
        s.body = join(body_lines, "\n");
        body_lines.clear();
        const auto source = "summary " + std::to_string(a.summaries.size());
        s.quotes = extract_quotes(s.title + "\n" + s.body, source);
    };

    for (const auto& line : normalized_lines(text)) {
        if (line.text.empty()) continue;
        if (line.table) {
            if (!table_reported) report.fatal("CL_TABLE", at_line(line.number), "markdown table is outside the output format");
            table_reported = true;
            continue;
        }
        if (auto s = step_header(line.text)) {
            if (step == 3) flush_summary();
            step = *s;
            steps_seen.insert(step);
            continue;
        }
        const auto loc = "step " + std::to_string(step) + ", " + at_line(line.number);
        if (step == 1 || step == 2) {
            auto m = match_label(line.text, "collocate");
            if (!m) continue;
            auto entry = split_word_pos(m->rest);
            if (!entry) {
                report.fatal("CL_MALFORMED_ENTRY", loc, "expected \"Collocate N: word, part of speech\"");
                continue;
            }
            const auto label = std::to_string(m->number);
            if (step == 1) {
                if (a.pos_labels.count(m->number) != 0) {
                    report.warning("CL_DUPLICATE_LABEL", loc, "label " + label + " repeated in step 1");
                    continue;
                }
                if (!input_collocates.empty()) {
                    if (m->number < 1 || static_cast<std::size_t>(m->number) > input_collocates.size()) {
                        report.warning("CL_LABEL_MISMATCH", loc, "label " + label + " is not in the input list");
                    } else if (!iequals(input_collocates[static_cast<std::size_t>(m->number - 1)], entry->word)) {
                        report.warning("CL_LABEL_MISMATCH", loc,
                                       "label " + label + " is \"" + input_collocates[static_cast<std::size_t>(m->number - 1)] +
                                           "\" in the input but \"" + entry->word + "\" in the output");
                    }
                }
                a.pos_labels[m->number] = *entry;
            } else {
                const auto it = a.pos_labels.find(m->number);
                if (it == a.pos_labels.end()) {
                    report.fatal("CL_UNKNOWN_LABEL", loc, "label " + label + " does not occur in step 1");
                    continue;
                }
                if (!iequals(it->second.word, entry->word)) {
                    report.fatal("CL_WORD_MISMATCH", loc,
                                 "label " + label + " is \"" + it->second.word + "\" in step 1 but \"" + entry->word + "\" in step 2");
                    continue;
                }
                if (!is_content_pos(entry->pos)) {
                    report.fatal("CL_NON_CONTENT_POS", loc,
                                 "\"" + entry->word + "\" is tagged \"" + entry->pos + "\", not a content part of speech");
                    continue;
                }
                if (entry->pos != it->second.pos) {
                    report.warning("CL_POS_MISMATCH", loc,
                                   "label " + label + " is tagged \"" + it->second.pos + "\" in step 1 but \"" + entry->pos + "\" in step 2");
                }
                if (!content_labels.insert(m->number).second) {
                    report.warning("CL_DUPLICATE_CONTENT", loc, "label " + label + " listed twice in step 2");
                    continue;
                }
                a.content_list.push_back({m->number, entry->word, entry->pos});
            }
        } else if (step == 3) {
            if (auto m = match_label(line.text, "summary")) {
                flush_summary();
                a.summaries.push_back({m->rest, "", {}});
            } else if (!a.summaries.empty()) {
                body_lines.push_back(line.text);
            }
        }
    }
    if (step == 3) flush_summary();

    for (int s = 1; s <= 3; ++s) {
        if (steps_seen.count(s) == 0) report.fatal("CL_MISSING_STEP", "step " + std::to_string(s), "step " + std::to_string(s) + " is absent");
    }
    if (!input_collocates.empty() && a.pos_labels.size() != input_collocates.size()) {
        report.warning("CL_COUNT_MISMATCH", "step 1",
                       std::to_string(a.pos_labels.size()) + " labelled collocates for " +
                           std::to_string(input_collocates.size()) + " inputs");
    }
    if (steps_seen.count(3) != 0 && a.summaries.empty()) report.fatal("CL_MISSING_SUMMARY", "step 3", "no summaries found");

    if (!report.has_fatal()) result.analysis = std::move(a);
    return result;
}

json CollocateAnalysis::to_json() const {
    json j{{"pos_labels", json::array()}, {"content_list", json::array()}, {"summaries", json::array()}};
    for (const auto& [label, p] : pos_labels) j["pos_labels"].push_back({{"label", label}, {"word", p.word}, {"pos", p.pos}});
    for (const auto& c : content_list) j["content_list"].push_back({{"label", c.label}, {"word", c.word}, {"pos", c.pos}});
    for (const auto& s : summaries) {
        json quotes = json::array();
        for (const auto& q : s.quotes) quotes.push_back({{"text", q.text}, {"source", q.source}});
        j["summaries"].push_back({{"title", s.title}, {"body", s.body}, {"quotes", quotes}});
    }
    return j;
}

CollocateAnalysis CollocateAnalysis::from_json(const json& j) {
    CollocateAnalysis a;
    for (const auto& p : j.at("pos_labels")) a.pos_labels[p.at("label").get<int>()] = {p.at("word"), p.at("pos")};
    for (const auto& c : j.at("content_list")) a.content_list.push_back({c.at("label").get<int>(), c.at("word"), c.at("pos")});
    for (const auto& s : j.at("summaries")) {
        CollocateSummary sum{s.at("title"), s.at("body"), {}};
        for (const auto& q : s.at("quotes")) sum.quotes.push_back({q.at("text"), q.at("source")});
        a.summaries.push_back(std::move(sum));
    }
    return a;
}

// ---------------------------------------------------------------- concordance

std::set<int> ConcordanceAnalysis::yes_lines() const {
    std::set<int> out;
    for (const auto& [id, v] : verdicts) {
        if (v.mark == Mark::Yes) out.insert(id);
    }
    return out;
}

ParseResult<ConcordanceAnalysis> parse_concordance_analysis(std::string_view text, int expected_n) {
    if (expected_n <= 0) throw validation_error("BAD_EXPECTED_COUNT", "expected line count must be positive");
    ParseResult<ConcordanceAnalysis> result;
    auto& report = result.report;
    ConcordanceAnalysis a;

    struct Pending {
        std::optional<Mark> mark;
        std::string reason;
        std::string line_text;
    };
    std::map<int, Pending> pending;
    Pending* current = nullptr;
    std::string* open_field = nullptr;

    for (const auto& line : normalized_lines(text)) {
        if (line.text.empty()) continue;
        const auto loc = at_line(line.number);
        if (auto m = match_label(line.text, "concordance line")) {
            current = nullptr;
            open_field = nullptr;
            const auto id = std::to_string(m->number);
            if (m->number < 1 || m->number > expected_n) {
                report.warning("CN_EXTRA_LINE", loc, "line " + id + " is outside 1.." + std::to_string(expected_n));
                continue;
            }
            if (pending.count(m->number) != 0) {
                report.fatal("CN_DUPLICATE_LINE", loc, "line " + id + " judged twice");
                continue;
            }
            current = &pending[m->number];
            current->line_text = m->rest;
            open_field = &current->line_text;
            continue;
        }
        if (current == nullptr) continue;
        if (auto f = match_field(line.text, "original text")) {
            current->line_text = *f;
            open_field = &current->line_text;
        } else if (auto r = match_field(line.text, "reason")) {
            current->reason = *r;
            open_field = &current->reason;
        } else if (line.text.front() == '[') {
            open_field = nullptr;
            const auto close = line.text.find(']');
            const auto inner = close == std::string::npos ? std::string_view{} : trim(std::string_view(line.text).substr(1, close - 1));
            std::optional<Mark> mark;
            if (iequals(inner, "yes")) mark = Mark::Yes;
            if (iequals(inner, "no")) mark = Mark::No;
            if (!mark) {
                report.fatal("CN_BAD_MARK", loc, "unparseable mark \"" + line.text + "\"");
            } else if (current->mark && *current->mark != *mark) {
                report.fatal("CN_BAD_MARK", loc, "conflicting marks for one line");
            } else {
                current->mark = mark;
            }
        } else if (open_field != nullptr) {
            append_text(*open_field, line.text);
        }
    }

    for (int n = 1; n <= expected_n; ++n) {
        const auto where = "concordance line " + std::to_string(n);
        const auto it = pending.find(n);
        if (it == pending.end()) {
            report.fatal("CN_MISSING_LINE", where, "no verdict for " + where);
            continue;
        }
        if (!it->second.mark) {
            report.fatal("CN_MISSING_MARK", where, "no [Yes]/[No] mark for " + where);
            continue;
        }
        if (it->second.reason.empty()) {
            report.fatal("CN_MISSING_REASON", where, "no reason given for " + where);
            continue;
        }
        a.verdicts[n] = {*it->second.mark, it->second.reason, it->second.line_text};
    }

    if (!report.has_fatal()) result.analysis = std::move(a);
    return result;
}

json ConcordanceAnalysis::to_json() const {
    json j{{"verdicts", json::array()}, {"yes_lines", yes_lines()}};
    for (const auto& [id, v] : verdicts) {
        j["verdicts"].push_back(
            {{"line", id}, {"mark", v.mark == Mark::Yes ? "Yes" : "No"}, {"reason", v.reason}, {"line_text", v.line_text}});
    }
    return j;
}

ConcordanceAnalysis ConcordanceAnalysis::from_json(const json& j) {
    ConcordanceAnalysis a;
    for (const auto& v : j.at("verdicts")) {
        const auto mark = v.at("mark").get<std::string>();
        if (mark != "Yes" && mark != "No") throw validation_error("BAD_ANALYSIS", "mark must be Yes or No");
        a.verdicts[v.at("line").get<int>()] = {mark == "Yes" ? Mark::Yes : Mark::No, v.at("reason"), v.value("line_text", "")};
    }
    return a;
}

// ---------------------------------------------------------------- quotes

std::vector<Quote> extract_quotes(std::string_view body, const std::string& source, std::size_t min_words) {
    std::string s = straighten_quotes(body);
    erase_all(s, "**");
    std::vector<Quote> out;
    std::size_t open = s.find('"');
    while (open != std::string::npos) {
        const auto close = s.find('"', open + 1);
        if (close == std::string::npos) break;
        auto span = collapse_whitespace(std::string_view(s).substr(open + 1, close - open - 1));
        const auto words = static_cast<std::size_t>(std::count(span.begin(), span.end(), ' ')) + (span.empty() ? 0 : 1);
        if (words >= min_words) out.push_back({std::move(span), source});
        open = s.find('"', close + 1);
    }
    return out;
}

std::vector<Quote> extract_quotes(const KeywordAnalysis& a) {
    std::vector<Quote> out;
    for (const auto& [label, m] : a.meanings) {
        auto q = extract_quotes(m.meaning, "meaning " + std::to_string(label));
        out.insert(out.end(), q.begin(), q.end());
    }
    for (const auto& [label, asg] : a.assignments) {
        auto q = extract_quotes(asg.reason, "reason " + std::to_string(label));
        out.insert(out.end(), q.begin(), q.end());
    }
    return out;
}

std::vector<Quote> extract_quotes(const CollocateAnalysis& a) {
    std::vector<Quote> out;
    for (const auto& s : a.summaries) out.insert(out.end(), s.quotes.begin(), s.quotes.end());
    return out;
}

std::vector<Quote> extract_quotes(const ConcordanceAnalysis& a) {
    std::vector<Quote> out;
    for (const auto& [id, v] : a.verdicts) {
        auto q = extract_quotes(v.reason, "reason " + std::to_string(id));
        out.insert(out.end(), q.begin(), q.end());
    }
    return out;
}

}  // namespace taco
