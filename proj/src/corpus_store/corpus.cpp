#include "taco/corpus.hpp"

#include "taco/error.hpp"
#include "taco/langid.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace taco {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json IngestReport::to_json() const {
    json errs = json::array();
    for (const auto& e : errors) {
        errs.push_back({{"record", e.record_index}, {"id", e.id}, {"code", e.code}, {"message", e.message}});
    }
    json drops = json::array();
    for (const auto& [id, lang] : language_drops) drops.push_back({{"id", id}, {"language", lang}});
    return {{"records_read", records_read}, {"kept", kept},           {"dropped_language", dropped_language},
            {"malformed", malformed},       {"errors", errs},        {"language_drops", drops}};
}

Corpus::Corpus(std::vector<Document> documents, TokenizationPolicy policy)
    : documents_(std::move(documents)), policy_(policy) {
    token_index_.reserve(documents_.size());
    for (const auto& doc : documents_) token_index_.push_back(tokenize(doc.text, policy_));
}

std::size_t Corpus::total_tokens() const {
    return std::accumulate(token_index_.begin(), token_index_.end(), std::size_t{0},
                           [](std::size_t acc, const auto& toks) { return acc + toks.size(); });
}

std::optional<std::size_t> Corpus::find(const std::string& id) const {
    for (std::size_t i = 0; i < documents_.size(); ++i) {
        if (documents_[i].id == id) return i;
    }
    return std::nullopt;
}

IngestResult ingest(const std::vector<RawRecord>& records, const IngestOptions& options) {
    IngestReport report;
    std::vector<Document> docs;
    std::unordered_set<std::string> seen;
    const auto reject = [&](std::size_t index, const std::string& id, std::string code, std::string message) {
        ++report.malformed;
        report.errors.push_back({index, id, std::move(code), std::move(message)});
    };

    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        ++report.records_read;
        std::string id = rec.id.value_or("doc" + std::to_string(i + 1));
        if (id.empty()) {
            reject(i, id, "EMPTY_ID", "record has an empty id");
            continue;
        }
        if (!is_valid_utf8(rec.text)) {
            reject(i, id, "INVALID_UTF8", "record text is not valid UTF-8");
            continue;
        }
        std::string text = clean_text(rec.text);
        if (text.empty()) {
            reject(i, id, "EMPTY_TEXT", "record text is empty after cleaning");
            continue;
        }
        if (!seen.insert(id).second) {
            reject(i, id, "DUPLICATE_ID", "duplicate document id " + id);
            continue;
        }
        const auto guess = detect_language(text);
        if (options.lang_filter && !(guess.confident && guess.language == options.keep_language)) {
            ++report.dropped_language;
            report.language_drops.emplace_back(id, guess.confident ? guess.language : "und");
            continue;
        }
        docs.push_back(Document{std::move(id), std::move(text), rec.source, guess.confident ? guess.language : "und"});
    }
    if (docs.empty()) throw validation_error("EMPTY_CORPUS", "empty corpus: no document survived ingestion");
    report.kept = docs.size();
    return IngestResult{Corpus(std::move(docs), options.policy), std::move(report)};
}

std::vector<RawRecord> read_txt_directory(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw io_error("NOT_A_DIRECTORY", "not a directory: " + dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    std::vector<RawRecord> records;
    for (const auto& file : files) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        records.push_back(RawRecord{file.stem().string(), ss.str(), file.filename().string()});
    }
    return records;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text, char delimiter) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == delimiter) {
            row.push_back(std::move(field));
            field.clear();
            field_started = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (field_started || !field.empty() || !row.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            field_started = false;
        } else {
            field.push_back(c);
            field_started = true;
        }
    }
    if (field_started || !field.empty() || !row.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<RawRecord> read_csv(const fs::path& file, const CsvOptions& options) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    auto rows = parse_csv(ss.str(), options.delimiter);
    if (rows.empty()) return {};

    const auto& header = rows.front();
    const auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto text_col = column(options.text_column);
    if (!text_col) throw validation_error("MISSING_COLUMN", "CSV has no column named " + options.text_column);
    std::optional<std::size_t> id_col;
    if (!options.id_column.empty()) {
        id_col = column(options.id_column);
        if (!id_col) throw validation_error("MISSING_COLUMN", "CSV has no column named " + options.id_column);
    }

    std::vector<RawRecord> records;
    const auto source = file.filename().string();
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        RawRecord rec;
        rec.source = source + ":" + std::to_string(r + 1);
        if (id_col) rec.id = *id_col < row.size() ? row[*id_col] : std::string{};
        if (row.size() == header.size()) rec.text = row[*text_col];
        records.push_back(std::move(rec));
    }
    return records;
}

void save_corpus(const Corpus& corpus, const fs::path& dir) {
    fs::create_directories(dir);
    json docs = json::array();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& d = corpus.documents()[i];
        docs.push_back({{"index", i}, {"id", d.id}, {"source", d.source}, {"language", d.language},
                        {"tokens", corpus.tokens(i).size()}});
    }
    const json manifest{{"format", "taco-corpus"},
                        {"version", kCorpusFormatVersion},
                        {"policy", corpus.policy().name()},
                        {"documents", docs},
                        {"files", {{"texts", "documents.jsonl"}, {"tokens", "tokens.tsv"}}}};
    {
        std::ofstream out(dir / "manifest.json", std::ios::binary);
        out << manifest.dump(2) << '\n';
    }
    {
        std::ofstream out(dir / "documents.jsonl", std::ios::binary);
        for (const auto& d : corpus.documents()) out << json{{"id", d.id}, {"text", d.text}}.dump() << '\n';
    }
    std::ofstream out(dir / "tokens.tsv", std::ios::binary);
    out << "doc\tbegin\tend\ttoken\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (const auto& t : corpus.tokens(i)) out << i << '\t' << t.begin << '\t' << t.end << '\t' << t.text << '\n';
    }
    if (!out) throw io_error("WRITE_FAILED", "cannot write corpus to " + dir.string());
}

Corpus load_corpus(const fs::path& dir) {
    std::ifstream mf(dir / "manifest.json", std::ios::binary);
    if (!mf) throw io_error("READ_FAILED", "no corpus manifest in " + dir.string());
    json manifest;
    try {
        manifest = json::parse(mf);
    } catch (const json::exception& e) {
        throw validation_error("BAD_MANIFEST", std::string("corpus manifest is not valid JSON: ") + e.what());
    }
    if (manifest.value("format", "") != "taco-corpus" || manifest.value("version", 0) != kCorpusFormatVersion) {
        throw validation_error("BAD_MANIFEST", "unsupported corpus format in " + dir.string());
    }
    const auto policy = TokenizationPolicy::from_name(manifest.at("policy").get<std::string>());

    std::vector<Document> docs;
    std::ifstream texts(dir / "documents.jsonl", std::ios::binary);
    std::string line;
    const auto& meta = manifest.at("documents");
    for (const auto& m : meta) {
        if (!std::getline(texts, line)) throw validation_error("BAD_CORPUS", "documents.jsonl is truncated");
        const auto row = json::parse(line);
        Document d{row.at("id").get<std::string>(), row.at("text").get<std::string>(),
                   m.at("source").get<std::string>(), m.at("language").get<std::string>()};
        if (d.id != m.at("id").get<std::string>()) throw validation_error("BAD_CORPUS", "document order mismatch at " + d.id);
        docs.push_back(std::move(d));
    }

    std::vector<std::vector<Token>> index(docs.size());
    std::ifstream toks(dir / "tokens.tsv", std::ios::binary);
    std::getline(toks, line);
    while (std::getline(toks, line)) {
        const auto f = split(line, '\t');
        if (f.size() != 4) throw validation_error("BAD_CORPUS", "malformed token row: " + line);
        const auto doc = std::stoul(f[0]);
        if (doc >= docs.size()) throw validation_error("BAD_CORPUS", "token row for unknown document");
        Token t{f[3], static_cast<std::uint32_t>(std::stoul(f[1])), static_cast<std::uint32_t>(std::stoul(f[2]))};
        if (t.end > docs[doc].text.size() || t.begin >= t.end) {
            throw validation_error("BAD_CORPUS", "token offsets out of range in document " + docs[doc].id);
        }
        index[doc].push_back(std::move(t));
    }

    Corpus corpus;
    corpus.documents_ = std::move(docs);
    corpus.policy_ = policy;
    corpus.token_index_ = std::move(index);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        if (tokenize(corpus.documents_[i].text, policy) != corpus.token_index_[i]) {
            throw validation_error("BAD_CORPUS", "stored tokens disagree with re-tokenization of " + corpus.documents_[i].id);
        }
    }
    return corpus;
}

}  // namespace taco
