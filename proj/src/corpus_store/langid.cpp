#include "taco/langid.hpp"

#include "taco/assets.hpp"
#include "taco/text.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace taco {
namespace {

std::unordered_map<std::string, std::size_t> count_ngrams(std::string_view text) {
    std::unordered_map<std::string, std::size_t> counts;
    std::vector<std::size_t> bounds;
    for (const auto& word : token_strings(text)) {
        // Digits carry no language signal.
        if (std::all_of(word.begin(), word.end(), [](unsigned char c) { return c >= '0' && c <= '9'; })) continue;
        const std::string padded = " " + word + " ";
        bounds.clear();
        for (std::size_t i = 0; i < padded.size(); ++i) {
            if ((static_cast<unsigned char>(padded[i]) & 0xC0) != 0x80) bounds.push_back(i);
        }
        bounds.push_back(padded.size());
        const std::size_t cps = bounds.size() - 1;
        for (std::size_t n = 1; n <= 3; ++n) {
            for (std::size_t i = 0; i + n <= cps; ++i) {
                if (n == 1 && padded[bounds[i]] == ' ') continue;
                ++counts[padded.substr(bounds[i], bounds[i + n] - bounds[i])];
            }
        }
    }
    return counts;
}

std::size_t count_alphabetic(std::string_view text) {
    std::size_t n = 0;
    for (const auto& tok : token_strings(text)) {
        for (char32_t c : to_u32(tok)) {
            if (!(c >= U'0' && c <= U'9')) ++n;
        }
    }
    return n;
}

}  // namespace

NgramProfile NgramProfile::from_text(std::string_view text, std::size_t max_size) {
    const auto counts = count_ngrams(text);
    std::vector<std::pair<std::string, std::size_t>> items(counts.begin(), counts.end());
    // Frequency descending, n-gram ascending on ties.
    const auto keep = std::min(items.size(), max_size);
    std::partial_sort(items.begin(), items.begin() + static_cast<std::ptrdiff_t>(keep), items.end(),
                      [](const auto& a, const auto& b) { return a.second != b.second ? a.second > b.second : a.first < b.first; });
    NgramProfile profile;
    for (std::size_t i = 0; i < items.size() && i < max_size; ++i) {
        profile.ranks_.emplace(items[i].first, static_cast<long>(i));
        profile.ranked_.push_back(std::move(items[i].first));
    }
    return profile;
}

long NgramProfile::rank_of(const std::string& gram) const {
    const auto it = ranks_.find(gram);
    return it == ranks_.end() ? -1 : it->second;
}

LanguageDetector::LanguageDetector(DetectorConfig config) : config_(config) {}

void LanguageDetector::add_language(std::string code, std::string_view training_text) {
    auto profile = NgramProfile::from_text(training_text, config_.profile_size);
    for (auto& entry : profiles_) {
        if (entry.first == code) {
            entry.second = std::move(profile);
            return;
        }
    }
    profiles_.emplace_back(std::move(code), std::move(profile));
}

std::vector<std::pair<std::string, double>> LanguageDetector::distances(std::string_view text) const {
    return distances(NgramProfile::from_text(text, config_.profile_size));
}

std::vector<std::pair<std::string, double>> LanguageDetector::distances(const NgramProfile& doc) const {
    const auto max_penalty = static_cast<double>(config_.profile_size);
    std::vector<std::pair<std::string, double>> out;
    for (const auto& [code, profile] : profiles_) {
        double d = 0.0;
        for (std::size_t i = 0; i < doc.size(); ++i) {
            const long r = profile.rank_of(doc.ranked()[i]);
            d += r < 0 ? max_penalty : std::fabs(static_cast<double>(r) - static_cast<double>(i));
        }
        out.emplace_back(code, d);
    }
    return out;
}

LanguageGuess LanguageDetector::detect(std::string_view text) const {
    LanguageGuess guess;
    if (profiles_.empty() || count_alphabetic(text) < config_.min_alphabetic) return guess;

    const auto doc = NgramProfile::from_text(text, config_.profile_size);
    const double worst = static_cast<double>(doc.size()) * static_cast<double>(config_.profile_size);
    if (worst <= 0.0) return guess;

    auto dist = distances(doc);
    std::stable_sort(dist.begin(), dist.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
    guess.score = dist.front().second / worst;
    const double gap = dist.size() > 1 ? (dist[1].second - dist[0].second) / worst : 1.0;
    guess.language = dist.front().first;
    guess.confident = gap >= config_.margin;
    return guess;
}

const LanguageDetector& LanguageDetector::builtin() {
    static const LanguageDetector detector = [] {
        LanguageDetector d;
        for (const char* code : {"eng", "fra", "deu", "spa", "zho"}) {
            const auto text = assets::find(std::string("langid/") + code + ".txt");
            if (!text) throw std::logic_error(std::string("missing language profile asset for ") + code);
            d.add_language(code, *text);
        }
        return d;
    }();
    return detector;
}

LanguageGuess detect_language(std::string_view text) { return LanguageDetector::builtin().detect(text); }

}  // namespace taco
