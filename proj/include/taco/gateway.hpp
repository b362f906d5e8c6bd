#pragma once

#include "taco/error.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace taco {

struct Decoding {
    bool greedy = true;
    double temperature = 0.0;  ///< used when not greedy

    bool operator==(const Decoding&) const = default;
};

struct ModelConfig {
    std::string provider = "mock";
    std::string model = "mock";
    Decoding decoding;
    std::size_t max_output_tokens = 8192;
    std::string endpoint;
    std::chrono::milliseconds timeout{120000};
    /// Prompt budget in estimated tokens; 128k for GPT-4o, 2M for Gemini 1.5.
    std::size_t context_budget_tokens = 128000;
    /// Also send top_k = 1 under greedy decoding (providers that accept it).
    bool greedy_top_k = false;
    int max_retries = 4;
    std::chrono::milliseconds backoff_base{500};
    std::chrono::milliseconds backoff_cap{30000};
    std::size_t max_in_flight = 2;
    double requests_per_second = 2.0;
    /// Mock provider: directory of response fixtures.
    std::string fixture_dir;

    nlohmann::json summary() const;
};

/// Provider profiles keyed by name, read from the `profiles` object of a
/// JSON config file.
std::map<std::string, ModelConfig> load_profiles(const nlohmann::json& config);
std::map<std::string, ModelConfig> load_profiles(const std::filesystem::path& file);
ModelConfig model_config_from_json(const nlohmann::json& j);

/// Built-in profiles: mock, gpt-4o, gemini-1.5-pro, gemini-1.5-flash.
std::map<std::string, ModelConfig> default_profiles();

enum class ProviderFailure { Auth, RateLimit, ContextOverflow, Transport, Server, BadResponse };

class ProviderError : public Error {
public:
    /// Rate limits, server errors and transport failures are retryable by default.
    ProviderError(ProviderFailure failure, const std::string& message);
    ProviderError(ProviderFailure failure, const std::string& message, bool retryable);
    ProviderFailure failure() const noexcept { return failure_; }
    bool retryable() const noexcept { return retryable_; }

private:
    ProviderFailure failure_;
    bool retryable_;
};

/// Rough token estimate used for the pre-flight budget check: ceil(bytes / 4).
std::size_t estimate_tokens(std::string_view text);

/// Key for (provider, model, decoding, prompt text).
std::string request_digest(const ModelConfig& config, std::string_view prompt);

/// Chat-completions request body: one user message carrying the prompt.
nlohmann::json chat_request_body(const ModelConfig& config, std::string_view prompt);

struct Usage {
    std::uint64_t prompt_tokens = 0;
    std::uint64_t completion_tokens = 0;
};

struct ProviderRequest {
    const ModelConfig& config;
    std::string_view prompt;
    std::string_view digest;
};

struct ProviderReply {
    std::string text;
    std::string model;
    std::optional<Usage> usage;
};

class Provider {
public:
    virtual ~Provider() = default;
    virtual ProviderReply send(const ProviderRequest& request) = 0;
};

/// Replays fixture files. A file named `<request digest>.txt` answers that
/// request; otherwise the remaining *.txt files are served in name order,
/// cycling.
class MockProvider : public Provider {
public:
    explicit MockProvider(const std::filesystem::path& fixture_dir);
    explicit MockProvider(std::vector<std::string> cycle);

    ProviderReply send(const ProviderRequest& request) override;
    std::size_t calls() const;

private:
    mutable std::mutex mu_;
    std::map<std::string, std::string> by_digest_;
    std::vector<std::string> cycle_;
    std::size_t next_ = 0;
    std::size_t calls_ = 0;
};

/// Throws a non-retryable transport failure on any contact.
class UnreachableProvider : public Provider {
public:
    ProviderReply send(const ProviderRequest& request) override;
};

/// Chat-completions over HTTP(S). The API key comes from
/// TACO_<PROVIDER>_API_KEY.
class HttpProvider : public Provider {
public:
    ProviderReply send(const ProviderRequest& request) override;
};

std::shared_ptr<Provider> make_provider(const ModelConfig& config);

struct ModelResponse {
    std::string text;
    std::string model;
    std::string request_digest;
    std::string created_at;  ///< ISO-8601 UTC
    std::optional<Usage> usage;
    bool from_cache = false;
    std::size_t trial = 0;

    nlohmann::json to_json() const;
    static ModelResponse from_json(const nlohmann::json& j);
};

/// Content-addressed store: <dir>/<first two hex chars>/<key>.json, written
/// through a temp file and rename.
class ResponseCache {
public:
    explicit ResponseCache(std::filesystem::path dir);

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::json& record) const;
    std::filesystem::path path_for(const std::string& key) const;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
};

/// Cache key of trial `i`: trial 0 shares the plain request digest.
std::string trial_key(const std::string& digest, std::size_t trial);

enum class CacheMode { Use, Bypass };

CacheMode cache_mode_from_string(const std::string& s);

struct RepeatedRun {
    std::vector<ModelResponse> responses;
    std::vector<std::string> errors;  ///< one per failed trial, "trial N: message"
};

struct GatewayHooks {
    std::function<void(std::chrono::milliseconds)> sleep;
    std::function<std::chrono::system_clock::time_point()> now;
};

class Gateway {
public:
    Gateway(std::shared_ptr<Provider> provider, std::optional<ResponseCache> cache, GatewayHooks hooks = {});

    ModelResponse complete(const std::string& prompt, const ModelConfig& config);
    RepeatedRun run_repeated(const std::string& prompt, const ModelConfig& config, std::size_t k, CacheMode mode);

    std::size_t provider_calls() const { return provider_calls_; }

private:
    ModelResponse dispatch(const std::string& prompt, const ModelConfig& config, const std::string& digest,
                           const std::string& key, std::size_t trial);
    void acquire_slot(const ModelConfig& config);
    void release_slot();

    std::shared_ptr<Provider> provider_;
    std::optional<ResponseCache> cache_;
    GatewayHooks hooks_;

    std::mutex mu_;
    std::condition_variable cv_;
    std::size_t in_flight_ = 0;
    double tokens_ = -1.0;  ///< token bucket level; -1 before first use
    std::chrono::steady_clock::time_point last_refill_{};
    std::size_t provider_calls_ = 0;
};

/// Cache directory from TACO_CACHE_DIR, else `fallback`.
std::filesystem::path cache_dir_from_env(const std::filesystem::path& fallback);

}  // namespace taco
