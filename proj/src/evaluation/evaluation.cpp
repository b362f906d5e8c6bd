#include "taco/evaluation.hpp"

#include "taco/error.hpp"
#include "taco/text.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <unordered_map>

namespace taco {

using nlohmann::json;

std::string to_string(Metric m) {
    switch (m) {
        case Metric::Accuracy: return "Accuracy";
        case Metric::Ethicality: return "Ethicality";
        case Metric::Reasoning: return "Reasoning";
        case Metric::Reproducibility: return "Reproducibility";
    }
    return "?";
}

Metric metric_from_string(std::string_view s) {
    const auto lower = to_lower(trim(s));
    for (auto m : kAllMetrics) {
        if (to_lower(to_string(m)) == lower) return m;
    }
    throw validation_error("BAD_METRIC", "unknown metric \"" + std::string(s) + "\"");
}

void Rating::validate() const {
    const double doubled = score * 2.0;
    if (!(score >= 1.0 && score <= 5.0) || std::abs(doubled - std::round(doubled)) > 1e-9) {
        throw validation_error("BAD_SCORE", "score " + std::to_string(score) + " from rater " + rater_id +
                                                " is not on the 1-5 half-point scale");
    }
}

std::vector<Rating> parse_ratings_tsv(std::string_view text) {
    std::vector<Rating> out;
    std::size_t line_no = 0;
    for (auto raw : split_lines(text)) {
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split(line, '\t');
        if (line_no == 1 && !fields.empty() && trim(fields[0]) == "rater_id") continue;
        if (fields.size() != 4) {
            throw validation_error("BAD_RATINGS", "ratings line " + std::to_string(line_no) + ": expected 4 tab-separated fields");
        }
        Rating r;
        r.rater_id = std::string(trim(fields[0]));
        r.run_id = std::string(trim(fields[1]));
        r.metric = metric_from_string(fields[2]);
        try {
            std::size_t used = 0;
            const std::string score(trim(fields[3]));
            r.score = std::stod(score, &used);
            if (used != score.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            throw validation_error("BAD_RATINGS", "ratings line " + std::to_string(line_no) + ": score is not a number");
        }
        if (r.rater_id.empty() || r.run_id.empty()) {
            throw validation_error("BAD_RATINGS", "ratings line " + std::to_string(line_no) + ": empty rater or run id");
        }
        r.validate();
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<Rating> read_ratings_tsv(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read ratings " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_ratings_tsv(ss.str());
}

json ScoreCard::to_json() const {
    json j;
    for (const auto& [m, v] : per_metric_mean) j[to_string(m)] = v;
    j["Total"] = total;
    return j;
}

ScoreCard aggregate_ratings(const std::vector<Rating>& ratings) {
    std::map<Metric, std::pair<double, std::size_t>> sums;
    for (const auto& r : ratings) {
        r.validate();
        auto& [sum, n] = sums[r.metric];
        sum += r.score;
        ++n;
    }
    ScoreCard card;
    for (auto m : kAllMetrics) {
        const auto it = sums.find(m);
        if (it == sums.end()) throw validation_error("MISSING_METRIC", "no ratings for metric " + to_string(m));
        const double mean = it->second.first / static_cast<double>(it->second.second);
        card.per_metric_mean[m] = mean;
        card.total += mean;
    }
    return card;
}

std::map<std::string, ScoreCard> aggregate_by_run(const std::vector<Rating>& ratings) {
    std::map<std::string, std::vector<Rating>> by_run;
    for (const auto& r : ratings) by_run[r.run_id].push_back(r);
    std::map<std::string, ScoreCard> out;
    for (const auto& [run, rs] : by_run) {
        try {
            out[run] = aggregate_ratings(rs);
        } catch (const Error& e) {
            throw validation_error(e.code(), "run " + run + ": " + e.what());
        }
    }
    return out;
}

std::string render_score_table(const std::map<std::string, ScoreCard>& cards, const std::vector<std::string>& rows) {
    std::string out = "run";
    for (auto m : kAllMetrics) out += "\t" + to_string(m);
    out += "\tTotal\n";
    std::vector<std::string> order = rows;
    if (order.empty()) {
        for (const auto& [run, card] : cards) order.push_back(run);
    }
    char buf[32];
    for (const auto& run : order) {
        out += run;
        const auto it = cards.find(run);
        for (auto m : kAllMetrics) {
            out += "\t";
            if (it != cards.end()) {
                std::snprintf(buf, sizeof buf, "%.2f", it->second.per_metric_mean.at(m));
                out += buf;
            }
        }
        out += "\t";
        if (it != cards.end()) {
            std::snprintf(buf, sizeof buf, "%.2f", it->second.total);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

// ---------------------------------------------------------------- alpha

std::vector<double> likert_half_point_domain() {
    std::vector<double> d;
    for (int i = 2; i <= 10; ++i) d.push_back(i / 2.0);
    return d;
}

namespace {

std::optional<std::size_t> category_of(const std::vector<double>& domain, double v) {
    for (std::size_t i = 0; i < domain.size(); ++i) {
        if (std::abs(domain[i] - v) < 1e-9) return i;
    }
    return std::nullopt;
}

}  // namespace

void ReliabilityData::validate() const {
    if (value_domain.empty()) throw validation_error("BAD_DOMAIN", "value domain is empty");
    if (!std::is_sorted(value_domain.begin(), value_domain.end()) ||
        std::adjacent_find(value_domain.begin(), value_domain.end()) != value_domain.end()) {
        throw validation_error("BAD_DOMAIN", "value domain must be strictly increasing");
    }
    for (const auto& [unit, values] : units) {
        for (const auto& [rater, v] : values) {
            if (!category_of(value_domain, v)) {
                throw validation_error("BAD_VALUE", "unit " + unit + ", rater " + rater + ": value " + std::to_string(v) +
                                                        " is not in the value domain");
            }
        }
    }
}

ReliabilityData reliability_from_ratings(const std::vector<Rating>& ratings) {
    ReliabilityData data;
    data.value_domain = likert_half_point_domain();
    for (const auto& r : ratings) {
        r.validate();
        const auto unit = r.run_id + "/" + to_string(r.metric);
        if (!data.units[unit].emplace(r.rater_id, r.score).second) {
            throw validation_error("DUPLICATE_RATING", "rater " + r.rater_id + " rated " + unit + " twice");
        }
    }
    return data;
}

double krippendorff_alpha_ordinal(const ReliabilityData& data) {
    data.validate();
    const std::size_t c = data.value_domain.size();
    std::vector<std::vector<double>> o(c, std::vector<double>(c, 0.0));
    for (const auto& [unit, values] : data.units) {
        if (values.size() < 2) continue;
        std::vector<std::size_t> cats;
        for (const auto& [rater, v] : values) cats.push_back(*category_of(data.value_domain, v));
        const double w = 1.0 / static_cast<double>(cats.size() - 1);
        for (std::size_t i = 0; i < cats.size(); ++i) {
            for (std::size_t j = 0; j < cats.size(); ++j) {
                if (i != j) o[cats[i]][cats[j]] += w;
            }
        }
    }
    std::vector<double> n_c(c, 0.0);
    double n = 0.0;
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = 0; b < c; ++b) n_c[a] += o[a][b];
        n += n_c[a];
    }
    if (n == 0.0) throw validation_error("ALPHA_UNDEFINED", "alpha needs at least one unit with two or more values");

    // Ordinal squared distance from the marginal frequencies.
    const auto delta2 = [&](std::size_t a, std::size_t b) {
        if (a > b) std::swap(a, b);
        double s = 0.0;
        for (std::size_t g = a; g <= b; ++g) s += n_c[g];
        s -= (n_c[a] + n_c[b]) / 2.0;
        return s * s;
    };
    double observed = 0.0;
    double expected = 0.0;
    for (std::size_t a = 0; a < c; ++a) {
        for (std::size_t b = 0; b < c; ++b) {
            if (a == b) continue;
            const double d = delta2(a, b);
            observed += o[a][b] * d;
            expected += n_c[a] * n_c[b] * d;
        }
    }
    if (observed == 0.0) return 1.0;
    return 1.0 - (n - 1.0) * observed / expected;
}

// ---------------------------------------------------------------- ARI

double adjusted_rand_index(const Partition& p1, const Partition& p2) {
    if (p1.size() != p2.size() ||
        !std::equal(p1.begin(), p1.end(), p2.begin(), [](const auto& a, const auto& b) { return a.first == b.first; })) {
        throw validation_error("LABEL_SET_MISMATCH", "partitions cover different label sets");
    }
    const auto choose2 = [](double x) { return x * (x - 1.0) / 2.0; };
    std::map<std::pair<std::string, std::string>, double> cells;
    std::map<std::string, double> rows;
    std::map<std::string, double> cols;
    for (const auto& [label, cluster] : p1) {
        const auto& other = p2.at(label);
        cells[{cluster, other}] += 1.0;
        rows[cluster] += 1.0;
        cols[other] += 1.0;
    }
    double index = 0.0;
    for (const auto& [k, v] : cells) index += choose2(v);
    double sum_rows = 0.0;
    double sum_cols = 0.0;
    for (const auto& [k, v] : rows) sum_rows += choose2(v);
    for (const auto& [k, v] : cols) sum_cols += choose2(v);
    const double total = choose2(static_cast<double>(p1.size()));
    const double expected = total == 0.0 ? 0.0 : sum_rows * sum_cols / total;
    const double max_index = (sum_rows + sum_cols) / 2.0;
    if (max_index == expected) {
        // Both partitions trivial (all singletons or one block): agreement is all or nothing.
        return cells.size() == rows.size() && cells.size() == cols.size() ? 1.0 : 0.0;
    }
    return (index - expected) / (max_index - expected);
}

Partition theme_partition(const KeywordAnalysis& analysis) {
    Partition p;
    for (const auto& [label, asg] : analysis.assignments) p[std::to_string(label)] = std::to_string(asg.theme);
    return p;
}

// ---------------------------------------------------------------- stability

json StabilityReport::to_json() const {
    json j{{"task", to_string(task)}, {"runs", runs}};
    if (theme_count_min) j["theme_count_min"] = *theme_count_min;
    if (theme_count_max) j["theme_count_max"] = *theme_count_max;
    if (!pairwise_partition_agreement.empty()) j["pairwise_partition_agreement"] = pairwise_partition_agreement;
    if (!per_line_mark_agreement.empty()) {
        json lines = json::object();
        for (const auto& [id, v] : per_line_mark_agreement) lines[std::to_string(id)] = v;
        j["per_line_mark_agreement"] = lines;
    }
    if (!pairwise_content_overlap.empty()) j["pairwise_content_overlap"] = pairwise_content_overlap;
    return j;
}

namespace {

void require_runs(std::size_t n) {
    if (n < 2) throw validation_error("TOO_FEW_RUNS", "stability needs at least two runs");
}

template <typename T, typename F>
std::vector<std::vector<double>> pairwise(const std::vector<T>& items, F f) {
    std::vector<std::vector<double>> m(items.size(), std::vector<double>(items.size(), 1.0));
    for (std::size_t i = 0; i < items.size(); ++i) {
        for (std::size_t j = i + 1; j < items.size(); ++j) m[i][j] = m[j][i] = f(items[i], items[j]);
    }
    return m;
}

}  // namespace

StabilityReport stability(const std::vector<KeywordAnalysis>& runs) {
    require_runs(runs.size());
    StabilityReport r;
    r.task = TaskKind::Keyword;
    r.runs = runs.size();
    std::vector<Partition> parts;
    for (const auto& a : runs) {
        const int themes = static_cast<int>(a.themes.size());
        r.theme_count_min = std::min(r.theme_count_min.value_or(themes), themes);
        r.theme_count_max = std::max(r.theme_count_max.value_or(themes), themes);
        parts.push_back(theme_partition(a));
    }
    r.pairwise_partition_agreement = pairwise(parts, adjusted_rand_index);
    return r;
}

StabilityReport stability(const std::vector<ConcordanceAnalysis>& runs) {
    require_runs(runs.size());
    StabilityReport r;
    r.task = TaskKind::Concordance;
    r.runs = runs.size();
    for (const auto& a : runs) {
        if (a.verdicts.size() != runs.front().verdicts.size() ||
            !std::equal(a.verdicts.begin(), a.verdicts.end(), runs.front().verdicts.begin(),
                        [](const auto& x, const auto& y) { return x.first == y.first; })) {
            throw validation_error("LINE_SET_MISMATCH", "concordance runs judge different line sets");
        }
    }
    for (const auto& [id, v] : runs.front().verdicts) {
        std::size_t yes = 0;
        for (const auto& a : runs) yes += a.verdicts.at(id).mark == Mark::Yes ? 1 : 0;
        const auto modal = std::max(yes, runs.size() - yes);
        r.per_line_mark_agreement[id] = static_cast<double>(modal) / static_cast<double>(runs.size());
    }
    return r;
}

StabilityReport stability(const std::vector<CollocateAnalysis>& runs) {
    require_runs(runs.size());
    StabilityReport r;
    r.task = TaskKind::Collocate;
    r.runs = runs.size();
    std::vector<std::set<std::string>> sets;
    for (const auto& a : runs) {
        std::set<std::string> words;
        for (const auto& c : a.content_list) words.insert(to_lower(c.word));
        sets.push_back(std::move(words));
    }
    r.pairwise_content_overlap = pairwise(sets, [](const std::set<std::string>& x, const std::set<std::string>& y) {
        std::vector<std::string> both;
        std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(both));
        const auto uni = x.size() + y.size() - both.size();
        return uni == 0 ? 1.0 : static_cast<double>(both.size()) / static_cast<double>(uni);
    });
    return r;
}

StabilityReport stability_from_envelopes(const std::vector<json>& envelopes) {
    require_runs(envelopes.size());
    const auto task = task_kind_from_string(envelopes.front().at("task").get<std::string>());
    for (std::size_t i = 0; i < envelopes.size(); ++i) {
        const auto& e = envelopes[i];
        if (task_kind_from_string(e.at("task").get<std::string>()) != task) {
            throw validation_error("MIXED_TASKS", "stability runs mix task kinds");
        }
        if (!e.contains("analysis") || e.at("analysis").is_null()) {
            throw validation_error("RUN_NOT_PARSED", "run " + std::to_string(i + 1) + " has fatal violations and no analysis");
        }
    }
    switch (task) {
        case TaskKind::Keyword: {
            std::vector<KeywordAnalysis> runs;
            for (const auto& e : envelopes) runs.push_back(KeywordAnalysis::from_json(e.at("analysis")));
            return stability(runs);
        }
        case TaskKind::Collocate: {
            std::vector<CollocateAnalysis> runs;
            for (const auto& e : envelopes) runs.push_back(CollocateAnalysis::from_json(e.at("analysis")));
            return stability(runs);
        }
        case TaskKind::Concordance: {
            std::vector<ConcordanceAnalysis> runs;
            for (const auto& e : envelopes) runs.push_back(ConcordanceAnalysis::from_json(e.at("analysis")));
            return stability(runs);
        }
    }
    throw validation_error("MIXED_TASKS", "unknown task kind");
}

// ---------------------------------------------------------------- fidelity

std::string to_string(FidelityStatus s) {
    switch (s) {
        case FidelityStatus::Exact: return "Exact";
        case FidelityStatus::Fuzzy: return "Fuzzy";
        case FidelityStatus::NotFound: return "NotFound";
    }
    return "?";
}

json FidelityVerdict::to_json() const {
    return {{"quote", quote},
            {"status", to_string(status)},
            {"best_match_doc", best_match_doc ? json(*best_match_doc) : json(nullptr)},
            {"similarity", similarity}};
}

std::string normalize_for_fidelity(std::string_view text) {
    std::u32string cps = to_u32(to_lower(straighten_quotes(text)));
    std::u32string out;
    out.reserve(cps.size());
    bool pending_space = false;
    for (char32_t c : cps) {
        const bool dash = c == U'-' || (c >= 0x2010 && c <= 0x2015) || c == 0x2212;
        const bool space = dash || c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v' || c == 0x00A0;
        if (space) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(U' ');
        pending_space = false;
        out.push_back(c);
    }
    return from_u32(out);
}

namespace {

// Edit distance if it is at most `band`, else band + 1. Only cells inside the
// band are touched; cells outside it hold inf.
std::size_t banded_levenshtein(std::u32string_view a, std::u32string_view b, std::size_t band) {
    if (a.size() > b.size()) std::swap(a, b);
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (m - n > band) return band + 1;
    const std::size_t inf = band + 1;
    std::vector<std::size_t> prev(n + 1, inf);
    std::vector<std::size_t> cur(n + 1, inf);
    for (std::size_t i = 0; i <= std::min(n, band); ++i) prev[i] = i;
    for (std::size_t j = 1; j <= m; ++j) {
        const std::size_t lo = j > band ? j - band : 0;
        const std::size_t hi = std::min(n, j + band);
        std::size_t row_min = inf;
        if (lo == 0) {
            cur[0] = std::min(j, inf);
            row_min = cur[0];
        } else {
            cur[lo - 1] = inf;
        }
        for (std::size_t i = std::max<std::size_t>(lo, 1); i <= hi; ++i) {
            const std::size_t sub = prev[i - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::size_t del = prev[i] + 1;
            const std::size_t ins = cur[i - 1] + 1;
            cur[i] = std::min({sub, del, ins, inf});
            row_min = std::min(row_min, cur[i]);
        }
        if (row_min >= inf) return inf;
        std::swap(prev, cur);
    }
    return std::min(prev[n], inf);
}

std::vector<std::u32string> split_tokens(std::u32string_view s) {
    std::vector<std::u32string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == U' ') {
            if (i > start) out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

}  // namespace

double levenshtein_similarity(std::u32string_view a, std::u32string_view b) {
    const auto longest = std::max(a.size(), b.size());
    if (longest == 0) return 1.0;
    const auto d = banded_levenshtein(a, b, longest);
    return 1.0 - static_cast<double>(d) / static_cast<double>(longest);
}

FidelityIndex::FidelityIndex(const Corpus& corpus) {
    for (const auto& doc : corpus.documents()) {
        auto norm = normalize_for_fidelity(doc.text);
        starts_.push_back(joined_.size());
        joined_ += norm;
        joined_.push_back('\n');
        Doc d{doc.id, split_tokens(to_u32(norm)), {}};
        for (const auto& t : d.tokens) d.ids.push_back(vocab_.try_emplace(t, static_cast<int>(vocab_.size())).first->second);
        docs_.push_back(std::move(d));
    }
}

FidelityVerdict FidelityIndex::check(std::string_view quote, double fuzzy_threshold) const {
    FidelityVerdict v;
    v.quote = std::string(quote);
    const auto norm = normalize_for_fidelity(quote);
    if (norm.empty() || docs_.empty()) return v;

    const std::boyer_moore_horspool_searcher searcher(norm.begin(), norm.end());
    if (const auto hit = std::search(joined_.begin(), joined_.end(), searcher); hit != joined_.end()) {
        const auto pos = static_cast<std::size_t>(hit - joined_.begin());
        const auto doc = static_cast<std::size_t>(std::upper_bound(starts_.begin(), starts_.end(), pos) - starts_.begin()) - 1;
        v.status = FidelityStatus::Exact;
        v.best_match_doc = docs_[doc].id;
        v.similarity = 1.0;
        return v;
    }

    const auto q32 = to_u32(norm);
    const auto q_tokens = split_tokens(q32);
    const std::size_t len = q_tokens.size();
    // Query tokens as vocabulary ids; tokens absent from the corpus never overlap.
    std::unordered_map<int, int> wanted;
    for (const auto& t : q_tokens) {
        if (const auto it = vocab_.find(t); it != vocab_.end()) ++wanted[it->second];
    }
    const std::size_t min_overlap = std::max<std::size_t>(1, (len + 1) / 2);
    if (wanted.empty()) return v;

    double best = 0.0;
    std::u32string window;
    std::unordered_map<int, int> have;
    for (const auto& doc : docs_) {
        if (doc.ids.size() < len) continue;
        have.clear();
        std::size_t overlap = 0;
        const auto add = [&](int t) {
            const auto it = wanted.find(t);
            if (it == wanted.end()) return;
            if (have[t]++ < it->second) ++overlap;
        };
        const auto drop = [&](int t) {
            const auto it = wanted.find(t);
            if (it == wanted.end()) return;
            if (--have[t] < it->second) --overlap;
        };
        for (std::size_t i = 0; i < len; ++i) add(doc.ids[i]);
        for (std::size_t start = 0;; ++start) {
            if (overlap >= min_overlap) {
                window.clear();
                for (std::size_t i = start; i < start + len; ++i) {
                    if (i > start) window.push_back(U' ');
                    window += doc.tokens[i];
                }
                const auto longest = std::max(window.size(), q32.size());
                // Only windows that can beat the current best matter.
                const auto limit = static_cast<std::size_t>(std::floor((1.0 - best) * static_cast<double>(longest)));
                const auto band = std::min(longest / 2, limit);
                const auto d = banded_levenshtein(window, q32, band);
                if (d <= band) {
                    const double sim = 1.0 - static_cast<double>(d) / static_cast<double>(longest);
                    if (sim > best) {
                        best = sim;
                        v.best_match_doc = doc.id;
                    }
                }
            }
            if (start + len >= doc.ids.size()) break;
            drop(doc.ids[start]);
            add(doc.ids[start + len]);
        }
    }
    v.similarity = best;
    v.status = best >= fuzzy_threshold ? FidelityStatus::Fuzzy : FidelityStatus::NotFound;
    if (best == 0.0) v.best_match_doc.reset();
    return v;
}

FidelityVerdict citation_fidelity(std::string_view quote, const Corpus& corpus, double fuzzy_threshold) {
    return FidelityIndex(corpus).check(quote, fuzzy_threshold);
}

// ---------------------------------------------------------------- exclusion

ReliabilityData exclude_units(const ReliabilityData& data, const std::set<std::string>& exclusions) {
    for (const auto& id : exclusions) {
        if (data.units.count(id) == 0) throw validation_error("UNKNOWN_UNIT", "cannot exclude unknown unit " + id);
    }
    ReliabilityData out;
    out.value_domain = data.value_domain;
    for (const auto& [id, values] : data.units) {
        if (exclusions.count(id) == 0) out.units.emplace(id, values);
    }
    return out;
}

ConcordanceAnalysis exclude_units(const ConcordanceAnalysis& run, const std::set<int>& exclusions) {
    for (int id : exclusions) {
        if (run.verdicts.count(id) == 0) throw validation_error("UNKNOWN_UNIT", "cannot exclude unknown line " + std::to_string(id));
    }
    ConcordanceAnalysis out;
    for (const auto& [id, v] : run.verdicts) {
        if (exclusions.count(id) == 0) out.verdicts.emplace(id, v);
    }
    return out;
}

std::vector<ConcordanceAnalysis> exclude_units(const std::vector<ConcordanceAnalysis>& runs, const std::set<int>& exclusions) {
    std::vector<ConcordanceAnalysis> out;
    for (const auto& r : runs) out.push_back(exclude_units(r, exclusions));
    return out;
}

}  // namespace taco
