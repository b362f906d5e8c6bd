#pragma once

#include "taco/frequency.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

namespace taco {

/// 2x2 inputs for one word: occurrences in target (a) and reference (b),
/// corpus sizes in tokens (c, d).
struct ContingencyTable {
    std::uint64_t a = 0;
    std::uint64_t b = 0;
    std::uint64_t c = 0;
    std::uint64_t d = 0;

    /// Throws when a > c, b > d, or either corpus is empty.
    void validate() const;
    double expected_target() const;     ///< c * (a + b) / (c + d)
    double expected_reference() const;  ///< d * (a + b) / (c + d)

    bool operator==(const ContingencyTable&) const = default;
};

/// Two-cell log-likelihood, 2 * sum(O * ln(O / E)) over a and b, with
/// 0 * ln(0) taken as 0.
double log_likelihood(const ContingencyTable& t);

/// Pearson chi-squared over {a, b, c - a, d - b}, no continuity correction.
/// Tables with an empty expected cell score 0; see is_degenerate().
double chi_squared(const ContingencyTable& t);

/// True when some expected cell of the full 2x2 table is zero.
bool is_degenerate(const ContingencyTable& t);

enum class KeynessMeasure { LogLikelihood, ChiSquared };

std::string to_string(KeynessMeasure m);
KeynessMeasure keyness_measure_from_string(const std::string& name);

struct KeywordEntry {
    std::string token;
    ContingencyTable table;
    double ll = 0.0;
    double chi2 = 0.0;
    std::size_t rank = 0;

    double score(KeynessMeasure m) const { return m == KeynessMeasure::LogLikelihood ? ll : chi2; }
};

struct KeywordList {
    KeynessMeasure measure = KeynessMeasure::LogLikelihood;
    std::string reference_id;
    std::vector<KeywordEntry> entries;
    /// Candidates scored 0 by chi-squared because of an empty expected cell.
    std::size_t degenerate_tables = 0;

    std::vector<std::string> tokens() const;
};

struct KeywordOptions {
    KeynessMeasure measure = KeynessMeasure::LogLikelihood;
    std::size_t top_n = 100;
    std::uint64_t min_target_count = 5;
    /// Keep only words relatively more frequent in the target.
    bool positive_only = true;
    std::string reference_id = "reference";
};

KeywordList extract_keywords(const FrequencyList& target, const FrequencyList& reference, const KeywordOptions& options);

/// Manual keep/drop decisions layered over the stoplist. Keep wins over
/// the stoplist; drop always removes.
struct ManualFilter {
    std::set<std::string> keep;
    std::set<std::string> drop;
};

/// Tokens in both lists and not filtered out, in list_a order, re-ranked 1..n.
KeywordList intersect_keyword_lists(const KeywordList& list_a, const KeywordList& list_b,
                                    const std::set<std::string>& stoplist, const ManualFilter& manual = {});

/// `rank\ttoken\ttarget_count\tref_count\tll\tchi2`, scores with 6 decimals.
void write_keyword_tsv(const KeywordList& list, std::ostream& out);
/// Token column of a keyword TSV, in rank order.
std::vector<std::string> read_keyword_tokens(const std::filesystem::path& file);

/// One token per line; '#' starts a comment.
std::set<std::string> read_stoplist(std::istream& in);
std::set<std::string> read_stoplist(const std::filesystem::path& file);
/// Lines of the form `+token` (keep) or `-token` (drop); '#' comments.
ManualFilter read_manual_filter(const std::filesystem::path& file);

}  // namespace taco
