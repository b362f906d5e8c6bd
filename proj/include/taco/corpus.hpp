#pragma once

#include "taco/text.hpp"

#include <nlohmann/json.hpp>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace taco {

struct Document {
    std::string id;
    std::string text;
    std::string source;
    std::string language = "und";

    bool operator==(const Document&) const = default;
};

/// One input record before cleaning. A missing id is assigned sequentially.
struct RawRecord {
    std::optional<std::string> id;
    std::string text;
    std::string source;
};

struct RecordIssue {
    std::size_t record_index = 0;
    std::string id;
    std::string code;
    std::string message;
};

struct IngestReport {
    std::size_t records_read = 0;
    std::size_t kept = 0;
    std::size_t dropped_language = 0;
    std::size_t malformed = 0;
    std::vector<RecordIssue> errors;
    /// Ids of documents dropped by the language filter, with the guess.
    std::vector<std::pair<std::string, std::string>> language_drops;

    nlohmann::json to_json() const;
};

struct IngestOptions {
    TokenizationPolicy policy;
    bool lang_filter = true;
    std::string keep_language = "eng";
};

/// Cleaned, language-tagged documents plus their token index. Immutable
/// once built; concurrent reads are safe.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::vector<Document> documents, TokenizationPolicy policy);

    const std::vector<Document>& documents() const { return documents_; }
    const std::vector<Token>& tokens(std::size_t doc_index) const { return token_index_.at(doc_index); }
    const TokenizationPolicy& policy() const { return policy_; }
    std::size_t size() const { return documents_.size(); }
    std::size_t total_tokens() const;

    /// Index of the document with this id, if any.
    std::optional<std::size_t> find(const std::string& id) const;

    bool operator==(const Corpus&) const = default;

private:
    friend Corpus load_corpus(const std::filesystem::path&);

    std::vector<Document> documents_;
    std::vector<std::vector<Token>> token_index_;
    TokenizationPolicy policy_;
};

struct IngestResult {
    Corpus corpus;
    IngestReport report;
};

/// Cleans, language-filters and indexes the records. Bad records are
/// reported and skipped; an empty result throws EMPTY_CORPUS.
IngestResult ingest(const std::vector<RawRecord>& records, const IngestOptions& options = {});

/// One record per *.txt file, id = file stem, sorted by file name.
std::vector<RawRecord> read_txt_directory(const std::filesystem::path& dir);

struct CsvOptions {
    std::string text_column = "abstract";
    std::string id_column;  ///< empty: ids are assigned sequentially
    char delimiter = ',';
};

/// RFC 4180 CSV with a header row. Rows with the wrong field count are
/// surfaced as records with empty text so ingestion reports them.
std::vector<RawRecord> read_csv(const std::filesystem::path& file, const CsvOptions& options = {});

/// Parses CSV text into rows of fields.
std::vector<std::vector<std::string>> parse_csv(std::string_view text, char delimiter = ',');

inline constexpr int kCorpusFormatVersion = 1;

/// Writes manifest.json, documents.jsonl and tokens.tsv into `dir`.
void save_corpus(const Corpus& corpus, const std::filesystem::path& dir);

/// Loads a saved corpus and verifies its token table against a fresh
/// tokenization with the stored policy.
Corpus load_corpus(const std::filesystem::path& dir);

}  // namespace taco
