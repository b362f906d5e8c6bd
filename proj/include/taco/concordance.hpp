#pragma once

#include "taco/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace taco {

enum class WindowUnit { Words, Characters };

struct WindowSpec {
    WindowUnit unit = WindowUnit::Words;
    std::uint32_t left = 10;
    std::uint32_t right = 10;

    void validate() const;
};

WindowUnit window_unit_from_string(const std::string& s);

struct ConcordanceLine {
    std::size_t line_id = 0;
    std::string doc_id;
    std::string node;  ///< surface form as it appears in the document
    std::uint32_t node_begin = 0;
    std::uint32_t node_end = 0;
    std::string left;
    std::string right;

    bool operator==(const ConcordanceLine&) const = default;
};

/// Every match of `node` (tokenized with the corpus policy, so matching is
/// case-insensitive and multiword) in document then offset order.
std::vector<ConcordanceLine> concordance(const Corpus& corpus, const std::string& node, const WindowSpec& window);

/// splitmix64 generator; the sampling contract depends on its exact output.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();

private:
    std::uint64_t state_;
};

/// Reservoir sample (Algorithm R, slot j = next() % (i + 1)) of `n` lines,
/// returned in original order. n >= |lines| returns everything.
std::vector<ConcordanceLine> sample_concordances(const std::vector<ConcordanceLine>& lines, std::size_t n,
                                                 std::uint64_t seed);

struct CollocateEntry {
    std::string token;
    std::uint64_t cofrequency = 0;
    std::uint64_t left_count = 0;
    std::uint64_t right_count = 0;
    std::size_t rank = 0;

    bool operator==(const CollocateEntry&) const = default;
};

struct CollocateOptions {
    std::size_t top_n = 100;
    /// Skip positions occupied by any occurrence of the node itself.
    bool exclude_node = true;
};

std::vector<CollocateEntry> collocates(const Corpus& corpus, const std::string& node, const WindowSpec& span,
                                       const CollocateOptions& options = {});

enum class KwicFormat { Tsv, PromptBlock };

/// Tsv: `line_id\tdoc_id\tleft\tnode\tright` per line, no header.
/// PromptBlock: "N. left node right", numbered densely from 1.
std::string render_kwic(const std::vector<ConcordanceLine>& lines, KwicFormat format);

/// `rank\ttoken\tcofrequency\tleft\tright` with header.
std::string render_collocate_tsv(const std::vector<CollocateEntry>& entries);

/// Parses render_kwic(Tsv) output back into lines (offsets are not kept).
std::vector<ConcordanceLine> parse_kwic_tsv(std::string_view text);

}  // namespace taco
