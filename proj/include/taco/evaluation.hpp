#pragma once

#include "taco/analysis.hpp"
#include "taco/corpus.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taco {

enum class Metric { Accuracy, Ethicality, Reasoning, Reproducibility };

inline constexpr Metric kAllMetrics[] = {Metric::Accuracy, Metric::Ethicality, Metric::Reasoning, Metric::Reproducibility};

std::string to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct Rating {
    std::string rater_id;
    std::string run_id;
    Metric metric = Metric::Accuracy;
    double score = 1.0;  ///< 1.0 .. 5.0 in steps of 0.5

    /// Throws on a score off the half-point grid or outside [1, 5].
    void validate() const;
};

/// TSV with columns rater_id, run_id, metric, score; a header row is optional.
std::vector<Rating> parse_ratings_tsv(std::string_view text);
std::vector<Rating> read_ratings_tsv(const std::filesystem::path& file);

struct ScoreCard {
    std::map<Metric, double> per_metric_mean;
    double total = 0.0;

    nlohmann::json to_json() const;
};

ScoreCard aggregate_ratings(const std::vector<Rating>& ratings);

/// One score card per run_id.
std::map<std::string, ScoreCard> aggregate_by_run(const std::vector<Rating>& ratings);

/// run_id, four metric means and total; `rows` fixes the row order, missing
/// runs render as blank cells.
std::string render_score_table(const std::map<std::string, ScoreCard>& cards, const std::vector<std::string>& rows = {});

struct ReliabilityData {
    /// unit id -> rater id -> value
    std::map<std::string, std::map<std::string, double>> units;
    /// Ordered categories; every recorded value must be one of them.
    std::vector<double> value_domain;

    void validate() const;
};

/// 1.0, 1.5, ..., 5.0
std::vector<double> likert_half_point_domain();

/// Units keyed "<run_id>/<metric>", one value per rater.
ReliabilityData reliability_from_ratings(const std::vector<Rating>& ratings);

/// Krippendorff's alpha with the ordinal metric. Throws when no unit has two
/// or more values.
double krippendorff_alpha_ordinal(const ReliabilityData& data);

/// label -> cluster id
using Partition = std::map<std::string, std::string>;

double adjusted_rand_index(const Partition& p1, const Partition& p2);

/// keyword label -> theme index
Partition theme_partition(const KeywordAnalysis& analysis);

struct StabilityReport {
    TaskKind task = TaskKind::Keyword;
    std::size_t runs = 0;
    std::optional<int> theme_count_min;
    std::optional<int> theme_count_max;
    std::vector<std::vector<double>> pairwise_partition_agreement;  ///< ARI, keyword runs
    std::map<int, double> per_line_mark_agreement;                  ///< concordance runs
    std::vector<std::vector<double>> pairwise_content_overlap;      ///< Jaccard, collocate runs

    nlohmann::json to_json() const;
};

StabilityReport stability(const std::vector<KeywordAnalysis>& runs);
StabilityReport stability(const std::vector<ConcordanceAnalysis>& runs);
StabilityReport stability(const std::vector<CollocateAnalysis>& runs);

/// Runs given as analysis envelopes (see analysis_envelope); all must share
/// one task kind and carry an analysis.
StabilityReport stability_from_envelopes(const std::vector<nlohmann::json>& envelopes);

enum class FidelityStatus { Exact, Fuzzy, NotFound };

std::string to_string(FidelityStatus s);

struct FidelityVerdict {
    std::string quote;
    FidelityStatus status = FidelityStatus::NotFound;
    std::optional<std::string> best_match_doc;
    double similarity = 0.0;

    nlohmann::json to_json() const;
};

/// Lowercase, straight quotes, hyphens and dashes to spaces, whitespace
/// collapsed.
std::string normalize_for_fidelity(std::string_view text);

/// Normalized Levenshtein similarity over code points, 1 - d / max(len).
double levenshtein_similarity(std::u32string_view a, std::u32string_view b);

/// Corpus preprocessed once for repeated quote checks.
class FidelityIndex {
public:
    explicit FidelityIndex(const Corpus& corpus);

    /// Windows sharing fewer than half of the quote's tokens are not scored;
    /// similarity below 0.5 is reported as 0.
    FidelityVerdict check(std::string_view quote, double fuzzy_threshold = 0.85) const;

private:
    struct Doc {
        std::string id;
        std::vector<std::u32string> tokens;
        std::vector<int> ids;  ///< tokens as vocab_ ids
    };
    std::unordered_map<std::u32string, int> vocab_;
    std::string joined_;                 ///< normalized documents separated by '\n'
    std::vector<std::size_t> starts_;    ///< offset of each document in joined_
    std::vector<Doc> docs_;
};

FidelityVerdict citation_fidelity(std::string_view quote, const Corpus& corpus, double fuzzy_threshold = 0.85);

ReliabilityData exclude_units(const ReliabilityData& data, const std::set<std::string>& exclusions);
ConcordanceAnalysis exclude_units(const ConcordanceAnalysis& run, const std::set<int>& exclusions);
std::vector<ConcordanceAnalysis> exclude_units(const std::vector<ConcordanceAnalysis>& runs, const std::set<int>& exclusions);

}  // namespace taco
