#include "taco/concordance.hpp"

#include "taco/error.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>

namespace taco {

void WindowSpec::validate() const {
    if (left < 1 || right < 1) throw validation_error("BAD_WINDOW", "window extents must be at least 1");
}

WindowUnit window_unit_from_string(const std::string& s) {
    if (s == "words" || s == "word") return WindowUnit::Words;
    if (s == "chars" || s == "characters") return WindowUnit::Characters;
    throw validation_error("BAD_WINDOW", "unit must be words or chars, got " + s);
}

namespace {

std::vector<std::string> node_tokens(const Corpus& corpus, const std::string& node) {
    auto toks = token_strings(node, corpus.policy());
    if (toks.empty()) throw validation_error("EMPTY_NODE", "node '" + node + "' contains no tokens");
    return toks;
}

// Start positions of every match of `needle` in one document's tokens.
std::vector<std::size_t> find_matches(const std::vector<Token>& tokens, const std::vector<std::string>& needle) {
    std::vector<std::size_t> hits;
    if (tokens.size() < needle.size()) return hits;
    for (std::size_t i = 0; i + needle.size() <= tokens.size(); ++i) {
        if (tokens[i].text != needle[0]) continue;
        bool ok = true;
        for (std::size_t k = 1; k < needle.size() && ok; ++k) ok = tokens[i + k].text == needle[k];
        if (ok) hits.push_back(i);
    }
    return hits;
}

}  // namespace

std::vector<ConcordanceLine> concordance(const Corpus& corpus, const std::string& node, const WindowSpec& window) {
    window.validate();
    const auto needle = node_tokens(corpus, node);
    std::vector<ConcordanceLine> lines;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto& tokens = corpus.tokens(d);
        const std::string_view text = corpus.documents()[d].text;
        for (const auto start : find_matches(tokens, needle)) {
            const auto last = start + needle.size() - 1;
            ConcordanceLine line;
            line.line_id = lines.size() + 1;
            line.doc_id = corpus.documents()[d].id;
            line.node_begin = tokens[start].begin;
            line.node_end = tokens[last].end;
            line.node = std::string(text.substr(line.node_begin, line.node_end - line.node_begin));
            std::size_t left_begin = line.node_begin;
            std::size_t right_end = line.node_end;
            if (window.unit == WindowUnit::Words) {
                if (start > 0) left_begin = tokens[start - std::min<std::size_t>(start, window.left)].begin;
                const auto after = tokens.size() - 1 - last;
                if (after > 0) right_end = tokens[last + std::min<std::size_t>(after, window.right)].end;
                line.left = std::string(trim(text.substr(left_begin, line.node_begin - left_begin)));
                line.right = std::string(trim(text.substr(line.node_end, right_end - line.node_end)));
            } else {
                left_begin = step_back_code_points(text, line.node_begin, window.left);
                right_end = step_forward_code_points(text, line.node_end, window.right);
                line.left = std::string(text.substr(left_begin, line.node_begin - left_begin));
                line.right = std::string(text.substr(line.node_end, right_end - line.node_end));
            }
            lines.push_back(std::move(line));
        }
    }
    return lines;
}

std::uint64_t SplitMix64::next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::vector<ConcordanceLine> sample_concordances(const std::vector<ConcordanceLine>& lines, std::size_t n,
                                                 std::uint64_t seed) {
    if (n >= lines.size()) return lines;
    std::vector<std::size_t> reservoir(n);
    for (std::size_t i = 0; i < n; ++i) reservoir[i] = i;
    SplitMix64 rng(seed);
    for (std::size_t i = n; i < lines.size(); ++i) {
        const auto j = rng.next() % (static_cast<std::uint64_t>(i) + 1);
        if (j < n) reservoir[j] = i;
    }
    std::sort(reservoir.begin(), reservoir.end());
    std::vector<ConcordanceLine> out;
    out.reserve(n);
    for (const auto idx : reservoir) out.push_back(lines[idx]);
    return out;
}

std::vector<CollocateEntry> collocates(const Corpus& corpus, const std::string& node, const WindowSpec& span,
                                       const CollocateOptions& options) {
    span.validate();
    if (span.unit != WindowUnit::Words) throw validation_error("BAD_WINDOW", "collocate spans are measured in words");
    const auto needle = node_tokens(corpus, node);
    std::unordered_map<std::string, CollocateEntry> counts;
    std::vector<bool> is_node;
    for (std::size_t d = 0; d < corpus.size(); ++d) {
        const auto& tokens = corpus.tokens(d);
        const auto hits = find_matches(tokens, needle);
        if (hits.empty()) continue;
        is_node.assign(tokens.size(), false);
        for (const auto h : hits) {
            for (std::size_t k = 0; k < needle.size(); ++k) is_node[h + k] = true;
        }
        for (const auto h : hits) {
            const auto last = h + needle.size() - 1;
            const auto lo = h - std::min<std::size_t>(h, span.left);
            for (std::size_t p = lo; p < h; ++p) {
                if (options.exclude_node && is_node[p]) continue;
                auto& e = counts[tokens[p].text];
                ++e.left_count;
            }
            const auto hi = std::min(tokens.size() - 1, last + span.right);
            for (std::size_t p = last + 1; p <= hi; ++p) {
                if (options.exclude_node && is_node[p]) continue;
                auto& e = counts[tokens[p].text];
                ++e.right_count;
            }
        }
    }
    std::vector<CollocateEntry> out;
    out.reserve(counts.size());
    for (auto& [tok, e] : counts) {
        e.token = tok;
        e.cofrequency = e.left_count + e.right_count;
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const CollocateEntry& a, const CollocateEntry& b) {
        return a.cofrequency != b.cofrequency ? a.cofrequency > b.cofrequency : a.token < b.token;
    });
    if (out.size() > options.top_n) out.resize(options.top_n);
    for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = i + 1;
    return out;
}

std::string render_kwic(const std::vector<ConcordanceLine>& lines, KwicFormat format) {
    std::ostringstream out;
    std::size_t n = 0;
    for (const auto& l : lines) {
        if (format == KwicFormat::Tsv) {
            out << l.line_id << '\t' << l.doc_id << '\t' << l.left << '\t' << l.node << '\t' << l.right << '\n';
        } else {
            out << ++n << '.';
            for (const auto* part : {&l.left, &l.node, &l.right}) {
                if (!part->empty()) out << ' ' << *part;
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string render_collocate_tsv(const std::vector<CollocateEntry>& entries) {
    std::ostringstream out;
    out << "rank\ttoken\tcofrequency\tleft\tright\n";
    for (const auto& e : entries) {
        out << e.rank << '\t' << e.token << '\t' << e.cofrequency << '\t' << e.left_count << '\t' << e.right_count << '\n';
    }
    return out.str();
}

std::vector<ConcordanceLine> parse_kwic_tsv(std::string_view text) {
    std::vector<ConcordanceLine> lines;
    for (const auto raw : split_lines(text)) {
        if (raw.empty()) continue;
        const auto f = split(raw, '\t');
        if (f.size() != 5) throw validation_error("BAD_KWIC", "KWIC rows need 5 tab-separated fields");
        ConcordanceLine l;
        try {
            l.line_id = std::stoul(f[0]);
        } catch (const std::exception&) {
            throw validation_error("BAD_KWIC", "KWIC line id is not a number: " + f[0]);
        }
        l.doc_id = f[1];
        l.left = f[2];
        l.node = f[3];
        l.right = f[4];
        lines.push_back(std::move(l));
    }
    return lines;
}

}  // namespace taco
