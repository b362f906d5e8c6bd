#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace taco {

struct LanguageGuess {
    std::string language = "und";  ///< ISO-639-3 code or "und"
    /// Out-of-place distance of the best profile, normalized by the
    /// worst-case distance for this text (0 = identical ranking).
    double score = 0.0;
    bool confident = false;
};

/// Ranked n-gram profile in the style of Cavnar and Trenkle: character
/// 1- to 3-grams of space-padded lowercase words, most frequent first.
class NgramProfile {
public:
    static NgramProfile from_text(std::string_view text, std::size_t max_size);

    const std::vector<std::string>& ranked() const { return ranked_; }
    /// Rank of an n-gram, or -1 when absent.
    long rank_of(const std::string& gram) const;
    std::size_t size() const { return ranked_.size(); }

private:
    std::vector<std::string> ranked_;
    std::unordered_map<std::string, long> ranks_;
};

struct DetectorConfig {
    std::size_t profile_size = 300;
    /// Required gap between best and second-best distance, as a fraction of
    /// the worst-case distance.
    double margin = 0.05;
    std::size_t min_alphabetic = 20;
};

class LanguageDetector {
public:
    explicit LanguageDetector(DetectorConfig config = {});

    /// Adds (or replaces) a language profile built from training text.
    void add_language(std::string code, std::string_view training_text);

    LanguageGuess detect(std::string_view text) const;

    /// Raw out-of-place distance between `text` and every profile, in
    /// profile insertion order.
    std::vector<std::pair<std::string, double>> distances(std::string_view text) const;

    const DetectorConfig& config() const { return config_; }

    /// Detector loaded with the shipped eng/fra/deu/spa/zho (pinyin) profiles.
    static const LanguageDetector& builtin();

private:
    std::vector<std::pair<std::string, double>> distances(const NgramProfile& doc) const;

    DetectorConfig config_;
    std::vector<std::pair<std::string, NgramProfile>> profiles_;
};

/// Convenience wrapper over LanguageDetector::builtin().
LanguageGuess detect_language(std::string_view text);

}  // namespace taco
