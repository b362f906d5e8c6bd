#include "taco/keyness.hpp"

#include "taco/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

namespace taco {

void ContingencyTable::validate() const {
    if (c == 0 || d == 0) throw validation_error("BAD_TABLE", "corpus sizes must be positive");
    if (a > c || b > d) throw validation_error("BAD_TABLE", "word count exceeds corpus size");
}

double ContingencyTable::expected_target() const {
    return static_cast<double>(c) * static_cast<double>(a + b) / static_cast<double>(c + d);
}

double ContingencyTable::expected_reference() const {
    return static_cast<double>(d) * static_cast<double>(a + b) / static_cast<double>(c + d);
}

namespace {

double o_ln_o_over_e(double o, double e) { return o > 0.0 ? o * std::log(o / e) : 0.0; }

}  // namespace

double log_likelihood(const ContingencyTable& t) {
    t.validate();
    if (t.a + t.b == 0) return 0.0;
    const double ll = 2.0 * (o_ln_o_over_e(static_cast<double>(t.a), t.expected_target()) +
                             o_ln_o_over_e(static_cast<double>(t.b), t.expected_reference()));
    // Rounding can leave a tiny negative for equal relative frequencies.
    return std::max(ll, 0.0);
}

bool is_degenerate(const ContingencyTable& t) {
    t.validate();
    const auto row1 = t.a + t.b;
    const auto row2 = (t.c - t.a) + (t.d - t.b);
    return row1 == 0 || row2 == 0;
}

double chi_squared(const ContingencyTable& t) {
    if (is_degenerate(t)) return 0.0;
    const double n = static_cast<double>(t.c + t.d);
    const double rows[2] = {static_cast<double>(t.a + t.b), static_cast<double>((t.c - t.a) + (t.d - t.b))};
    const double cols[2] = {static_cast<double>(t.c), static_cast<double>(t.d)};
    const double observed[2][2] = {{static_cast<double>(t.a), static_cast<double>(t.b)},
                                   {static_cast<double>(t.c - t.a), static_cast<double>(t.d - t.b)}};
    double chi2 = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const double e = rows[i] * cols[j] / n;
            const double diff = observed[i][j] - e;
            chi2 += diff * diff / e;
        }
    }
    return chi2;
}

std::string to_string(KeynessMeasure m) { return m == KeynessMeasure::LogLikelihood ? "ll" : "chi2"; }

KeynessMeasure keyness_measure_from_string(const std::string& name) {
    if (name == "ll" || name == "log_likelihood") return KeynessMeasure::LogLikelihood;
    if (name == "chi2" || name == "chi_squared") return KeynessMeasure::ChiSquared;
    throw validation_error("BAD_MEASURE", "unknown keyness measure: " + name);
}

std::vector<std::string> KeywordList::tokens() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(e.token);
    return out;
}

KeywordList extract_keywords(const FrequencyList& target, const FrequencyList& reference, const KeywordOptions& options) {
    if (target.empty() || reference.empty()) throw validation_error("EMPTY_FREQUENCY_LIST", "keyness needs two non-empty frequency lists");
    KeywordList list;
    list.measure = options.measure;
    list.reference_id = options.reference_id;
    if (options.top_n == 0) return list;

    const auto c = target.total_tokens();
    const auto d = reference.total_tokens();
    std::vector<KeywordEntry> scored;
    for (const auto& [token, entry] : target.entries()) {
        if (entry.raw_count < options.min_target_count) continue;
        const ContingencyTable t{entry.raw_count, reference.count(token), c, d};
        // a/c > b/d without floating point.
        const bool overrepresented = static_cast<unsigned __int128>(t.a) * d > static_cast<unsigned __int128>(t.b) * c;
        if (options.positive_only && !overrepresented) continue;
        KeywordEntry k{token, t, log_likelihood(t), chi_squared(t), 0};
        if (is_degenerate(t)) ++list.degenerate_tables;
        scored.push_back(std::move(k));
    }
    const auto measure = options.measure;
    const auto keep = std::min(options.top_n, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(),
                      [measure](const KeywordEntry& x, const KeywordEntry& y) {
                          const double sx = x.score(measure), sy = y.score(measure);
                          return sx != sy ? sx > sy : x.token < y.token;
                      });
    scored.resize(keep);
    for (std::size_t i = 0; i < scored.size(); ++i) scored[i].rank = i + 1;
    list.entries = std::move(scored);
    return list;
}

KeywordList intersect_keyword_lists(const KeywordList& list_a, const KeywordList& list_b,
                                    const std::set<std::string>& stoplist, const ManualFilter& manual) {
    std::unordered_set<std::string> in_b;
    for (const auto& e : list_b.entries) in_b.insert(e.token);
    KeywordList out;
    out.measure = list_a.measure;
    out.reference_id = list_a.reference_id + "+" + list_b.reference_id;
    for (const auto& e : list_a.entries) {
        if (!in_b.contains(e.token) || manual.drop.contains(e.token)) continue;
        if (stoplist.contains(e.token) && !manual.keep.contains(e.token)) continue;
        out.entries.push_back(e);
        out.entries.back().rank = out.entries.size();
    }
    return out;
}

void write_keyword_tsv(const KeywordList& list, std::ostream& out) {
    out << "rank\ttoken\ttarget_count\tref_count\tll\tchi2\n";
    char buf[64];
    for (const auto& e : list.entries) {
        out << e.rank << '\t' << e.token << '\t' << e.table.a << '\t' << e.table.b << '\t';
        std::snprintf(buf, sizeof buf, "%.6f\t%.6f", e.ll, e.chi2);
        out << buf << '\n';
    }
}

std::vector<std::string> read_keyword_tokens(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + file.string());
    std::string line;
    std::getline(in, line);
    if (line.rfind("rank\ttoken", 0) != 0) throw validation_error("BAD_KEYWORDS", "keyword TSV header missing in " + file.string());
    std::vector<std::string> tokens;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        if (f.size() < 2) throw validation_error("BAD_KEYWORDS", "malformed keyword row: " + line);
        tokens.push_back(f[1]);
    }
    return tokens;
}

std::set<std::string> read_stoplist(std::istream& in) {
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        const auto tok = trim(std::string_view(line).substr(0, hash));
        if (!tok.empty()) out.emplace(tok);
    }
    return out;
}

std::set<std::string> read_stoplist(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + file.string());
    return read_stoplist(in);
}

ManualFilter read_manual_filter(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + file.string());
    ManualFilter filter;
    std::string line;
    while (std::getline(in, line)) {
        const auto entry = trim(std::string_view(line).substr(0, line.find('#')));
        if (entry.empty()) continue;
        const auto tok = std::string(trim(entry.substr(1)));
        if (entry.front() == '+') {
            filter.keep.insert(tok);
        } else if (entry.front() == '-') {
            filter.drop.insert(tok);
        } else {
            throw validation_error("BAD_FILTER", "manual filter lines must start with + or -: " + std::string(entry));
        }
    }
    return filter;
}

}  // namespace taco
