#include "taco/frequency.hpp"

#include "taco/error.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

namespace taco {

FrequencyList::FrequencyList(std::map<std::string, FrequencyEntry> entries, std::uint64_t total_docs)
    : entries_(std::move(entries)), total_docs_(total_docs) {
    for (const auto& [tok, e] : entries_) {
        total_tokens_ += e.raw_count;
        if (e.raw_count > 0 && (e.doc_count < 1 || e.doc_count > total_docs_)) {
            throw validation_error("BAD_FREQUENCY", "doc_count out of range for token " + tok);
        }
    }
}

std::uint64_t FrequencyList::count(const std::string& token) const {
    const auto it = entries_.find(token);
    return it == entries_.end() ? 0 : it->second.raw_count;
}

std::vector<std::pair<std::string, FrequencyEntry>> FrequencyList::ranked() const {
    std::vector<std::pair<std::string, FrequencyEntry>> out(entries_.begin(), entries_.end());
    // entries_ is token-ordered, so a stable sort keeps ties lexicographic.
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.second.raw_count > b.second.raw_count; });
    return out;
}

FrequencyList build_frequency_list(const Corpus& corpus) {
    std::unordered_map<std::string, FrequencyEntry> counts;
    std::unordered_set<std::string_view> in_doc;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        in_doc.clear();
        for (const auto& tok : corpus.tokens(d)) {
            auto& e = counts[tok.text];
            ++e.raw_count;
            if (in_doc.insert(tok.text).second) ++e.doc_count;
        }
    }
    return FrequencyList(std::map<std::string, FrequencyEntry>(counts.begin(), counts.end()), corpus.size());
}

void write_frequency_tsv(const FrequencyList& list, std::ostream& out) {
    out << "rank\ttoken\traw_count\tdoc_count\n";
    std::size_t rank = 0;
    for (const auto& [tok, e] : list.ranked()) out << ++rank << '\t' << tok << '\t' << e.raw_count << '\t' << e.doc_count << '\n';
}

FrequencyList read_frequency_tsv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "rank\ttoken\traw_count\tdoc_count") {
        throw validation_error("BAD_FREQUENCY", "frequency TSV must start with rank\\ttoken\\traw_count\\tdoc_count");
    }
    std::map<std::string, FrequencyEntry> entries;
    std::uint64_t max_docs = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto f = split(line, '\t');
        if (f.size() != 4) throw validation_error("BAD_FREQUENCY", "line " + std::to_string(line_no) + ": expected 4 fields");
        FrequencyEntry e;
        try {
            e.raw_count = std::stoull(f[2]);
            e.doc_count = std::stoull(f[3]);
        } catch (const std::exception&) {
            throw validation_error("BAD_FREQUENCY", "line " + std::to_string(line_no) + ": counts must be integers");
        }
        if (!entries.emplace(f[1], e).second) {
            throw validation_error("BAD_FREQUENCY", "line " + std::to_string(line_no) + ": duplicate token " + f[1]);
        }
        max_docs = std::max(max_docs, e.doc_count);
    }
    return FrequencyList(std::move(entries), max_docs);
}

FrequencyList read_frequency_tsv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + file.string());
    return read_frequency_tsv(in);
}

}  // namespace taco
