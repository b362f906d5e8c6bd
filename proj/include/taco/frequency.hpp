#pragma once

#include "taco/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace taco {

struct FrequencyEntry {
    std::uint64_t raw_count = 0;
    std::uint64_t doc_count = 0;

    bool operator==(const FrequencyEntry&) const = default;
};

class FrequencyList {
public:
    FrequencyList() = default;
    FrequencyList(std::map<std::string, FrequencyEntry> entries, std::uint64_t total_docs);

    const std::map<std::string, FrequencyEntry>& entries() const { return entries_; }
    std::uint64_t total_tokens() const { return total_tokens_; }
    std::uint64_t total_docs() const { return total_docs_; }
    std::uint64_t count(const std::string& token) const;
    bool empty() const { return entries_.empty(); }

    /// Tokens by raw_count descending, token ascending on ties.
    std::vector<std::pair<std::string, FrequencyEntry>> ranked() const;

    bool operator==(const FrequencyList&) const = default;

private:
    std::map<std::string, FrequencyEntry> entries_;
    std::uint64_t total_tokens_ = 0;
    std::uint64_t total_docs_ = 0;
};

FrequencyList build_frequency_list(const Corpus& corpus);

/// TSV with header `rank\ttoken\traw_count\tdoc_count`.
void write_frequency_tsv(const FrequencyList& list, std::ostream& out);
/// Reads the TSV form. total_docs is taken as the largest doc_count seen,
/// since the format does not carry it.
FrequencyList read_frequency_tsv(std::istream& in);
FrequencyList read_frequency_tsv(const std::filesystem::path& file);

}  // namespace taco
