#include "taco/concordance.hpp"
#include "taco/error.hpp"
#include "taco/frequency.hpp"

#include <gtest/gtest.h>

#include <map>
#include <set>

using namespace taco;

namespace {

Corpus corpus_of(std::vector<std::string> texts) {
    std::vector<Document> docs;
    for (std::size_t i = 0; i < texts.size(); ++i) docs.push_back({"d" + std::to_string(i + 1), texts[i], "", "eng"});
    return Corpus(std::move(docs), TokenizationPolicy{});
}

std::vector<ConcordanceLine> synthetic_lines(std::size_t n) {
    std::vector<ConcordanceLine> lines;
    for (std::size_t i = 0; i < n; ++i) {
        ConcordanceLine l;
        l.line_id = i + 1;
        l.doc_id = "doc" + std::to_string(i);
        l.node = "node";
        lines.push_back(l);
    }
    return lines;
}

std::vector<std::size_t> indices(const std::vector<ConcordanceLine>& sample) {
    std::vector<std::size_t> out;
    for (const auto& l : sample) out.push_back(l.line_id - 1);
    return out;
}

}  // namespace

TEST(Concordance, SingleWordWindow) {
    auto lines = concordance(corpus_of({"a b c d e"}), "c", {WindowUnit::Words, 1, 1});
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].left, "b");
    EXPECT_EQ(lines[0].node, "c");
    EXPECT_EQ(lines[0].right, "d");
    EXPECT_EQ(lines[0].line_id, 1u);
}

TEST(Concordance, MultiwordNodeInDocumentOrder) {
    auto c = corpus_of({"Calling it the China-virus was common.", "No match here.", "The CHINA VIRUS label spread."});
    auto lines = concordance(c, "china virus", {WindowUnit::Words, 10, 10});
    ASSERT_EQ(lines.size(), 2u);
    EXPECT_EQ(lines[0].doc_id, "d1");
    EXPECT_EQ(lines[0].node, "China-virus");
    EXPECT_EQ(lines[1].doc_id, "d3");
    EXPECT_EQ(lines[1].node, "CHINA VIRUS");
    EXPECT_EQ(lines[1].line_id, 2u);
}

TEST(Concordance, ClipsAtDocumentEdges) {
    auto lines = concordance(corpus_of({"node one two"}), "node", {WindowUnit::Words, 10, 10});
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].left, "");
    EXPECT_EQ(lines[0].right, "one two");
}

TEST(Concordance, CharacterWindow) {
    auto lines = concordance(corpus_of({"abcdef node ghijkl"}), "node", {WindowUnit::Characters, 3, 4});
    ASSERT_EQ(lines.size(), 1u);
    EXPECT_EQ(lines[0].left, "ef ");
    EXPECT_EQ(lines[0].right, " ghi");
}

TEST(Concordance, EmptyNodeIsError) {
    EXPECT_THROW(concordance(corpus_of({"a b"}), " -- ", {}), Error);
}

TEST(Concordance, ContextIsVerbatimSubstring) {
    const std::string text = "Wuhan,  the city; Wuhan's market and   Wuhan again";
    auto c = corpus_of({text});
    for (const auto& l : concordance(c, "wuhan", {WindowUnit::Words, 2, 2})) {
        EXPECT_EQ(text.substr(l.node_begin, l.node_end - l.node_begin), l.node);
        EXPECT_NE(text.find(l.left), std::string::npos);
        EXPECT_NE(text.find(l.right), std::string::npos);
    }
}

TEST(SplitMix, ReferenceStream) {
    SplitMix64 rng(0);
    EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
    EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
    EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(Sampling, MatchesOracleSubset) {
    EXPECT_EQ(indices(sample_concordances(synthetic_lines(10), 3, 42)), (std::vector<std::size_t>{4, 5, 7}));
}

TEST(Sampling, IdentityWhenPopulationSmall) {
    auto lines = synthetic_lines(5);
    EXPECT_EQ(sample_concordances(lines, 5, 1), lines);
    EXPECT_EQ(sample_concordances(lines, 50, 1), lines);
}

TEST(Sampling, DeterministicSubsetWithoutDuplicates) {
    auto lines = synthetic_lines(300);
    for (std::uint64_t seed : {1ull, 7ull, 123456789ull}) {
        auto a = sample_concordances(lines, 50, seed);
        EXPECT_EQ(a, sample_concordances(lines, 50, seed));
        auto idx = indices(a);
        EXPECT_EQ(std::set<std::size_t>(idx.begin(), idx.end()).size(), 50u);
        EXPECT_TRUE(std::is_sorted(idx.begin(), idx.end()));
        EXPECT_LT(idx.back(), 300u);
    }
}

TEST(Collocates, LeftAndRight) {
    auto r = collocates(corpus_of({"x a n b y"}), "n", {WindowUnit::Words, 1, 1});
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0], (CollocateEntry{"a", 1, 1, 0, 1}));
    EXPECT_EQ(r[1], (CollocateEntry{"b", 1, 0, 1, 2}));
}

TEST(Collocates, CountedOncePerNodeOccurrence) {
    auto r = collocates(corpus_of({"n a n"}), "n", {WindowUnit::Words, 1, 1});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_EQ(r[0].token, "a");
    EXPECT_EQ(r[0].cofrequency, 2u);
    CollocateOptions keep;
    keep.exclude_node = false;
    auto with_node = collocates(corpus_of({"n a n"}), "n", {WindowUnit::Words, 1, 1}, keep);
    EXPECT_EQ(with_node.size(), 1u);
    auto wider = collocates(corpus_of({"n a n"}), "n", {WindowUnit::Words, 2, 2}, keep);
    ASSERT_EQ(wider.size(), 2u);
    EXPECT_EQ(wider[1].token, "n");
    EXPECT_EQ(wider[1].cofrequency, 2u);
}

TEST(Collocates, AbsentNodeGivesEmpty) {
    EXPECT_TRUE(collocates(corpus_of({"a b c"}), "zzz", {WindowUnit::Words, 5, 5}).empty());
}

TEST(Collocates, ExhaustiveScanOracle) {
    // 50 tokens over a 5-word vocabulary, node "n".
    const char* vocab[] = {"n", "a", "b", "c", "d"};
    std::vector<std::string> toks;
    std::uint64_t s = 17;
    for (int i = 0; i < 50; ++i) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        toks.push_back(vocab[(s >> 33) % 5]);
    }
    std::string text;
    for (const auto& t : toks) text += t + " ";
    const std::uint32_t L = 3, R = 2;

    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> oracle;
    for (std::size_t i = 0; i < toks.size(); ++i) {
        if (toks[i] != "n") continue;
        for (std::size_t p = (i >= L ? i - L : 0); p < i; ++p)
            if (toks[p] != "n") ++oracle[toks[p]].first;
        for (std::size_t p = i + 1; p <= i + R && p < toks.size(); ++p)
            if (toks[p] != "n") ++oracle[toks[p]].second;
    }
    auto c = corpus_of({text});
    auto got = collocates(c, "n", {WindowUnit::Words, L, R});
    ASSERT_EQ(got.size(), oracle.size());
    const auto nodes = build_frequency_list(c).count("n");
    std::uint64_t sum = 0;
    for (const auto& e : got) {
        EXPECT_EQ(e.left_count, oracle[e.token].first) << e.token;
        EXPECT_EQ(e.right_count, oracle[e.token].second) << e.token;
        sum += e.left_count + e.right_count;
    }
    EXPECT_LE(sum, nodes * (L + R));
}

TEST(Kwic, TsvAndPromptBlock) {
    ConcordanceLine l{7, "d3", "the", 0, 0, "left side", "right side"};
    EXPECT_EQ(render_kwic({l}, KwicFormat::Tsv), "7\td3\tleft side\tthe\tright side\n");
    ConcordanceLine m{9, "d4", "the", 0, 0, "", "end"};
    EXPECT_EQ(render_kwic({l, m}, KwicFormat::PromptBlock), "1. left side the right side\n2. the end\n");
    EXPECT_EQ(render_kwic({}, KwicFormat::Tsv), "");
    auto back = parse_kwic_tsv(render_kwic({l}, KwicFormat::Tsv));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0].right, "right side");
}

TEST(Kwic, CollocateTsvHeader) {
    auto tsv = render_collocate_tsv({{"a", 2, 1, 1, 1}});
    EXPECT_EQ(tsv, "rank\ttoken\tcofrequency\tleft\tright\n1\ta\t2\t1\t1\n");
}
