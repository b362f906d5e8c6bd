#include "taco/gateway.hpp"

#include "taco/digest.hpp"
#include "taco/text.hpp"

#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

namespace taco {

namespace fs = std::filesystem;
using nlohmann::json;

nlohmann::json ModelConfig::summary() const {
    json decoding_json = decoding.greedy ? json{{"mode", "greedy"}} : json{{"mode", "temperature"}, {"temperature", decoding.temperature}};
    return {{"provider", provider}, {"model", model}, {"decoding", decoding_json}, {"max_output_tokens", max_output_tokens},
            {"context_budget_tokens", context_budget_tokens}};
}

ModelConfig model_config_from_json(const json& j) {
    ModelConfig c;
    c.provider = j.value("provider", c.provider);
    c.model = j.value("model", c.model);
    if (j.contains("decoding")) {
        const auto& d = j.at("decoding");
        if (d.is_string()) {
            if (d.get<std::string>() != "greedy") throw validation_error("BAD_CONFIG", "decoding must be \"greedy\" or an object");
            c.decoding = Decoding{true, 0.0};
        } else {
            c.decoding.greedy = d.value("mode", std::string("greedy")) == "greedy";
            c.decoding.temperature = d.value("temperature", 0.0);
        }
    }
    c.max_output_tokens = j.value("max_output_tokens", c.max_output_tokens);
    c.endpoint = j.value("endpoint", c.endpoint);
    c.timeout = std::chrono::milliseconds(j.value("timeout_ms", static_cast<long>(c.timeout.count())));
    c.context_budget_tokens = j.value("context_budget_tokens", c.context_budget_tokens);
    c.greedy_top_k = j.value("greedy_top_k", c.greedy_top_k);
    c.max_retries = j.value("max_retries", c.max_retries);
    c.backoff_base = std::chrono::milliseconds(j.value("backoff_base_ms", static_cast<long>(c.backoff_base.count())));
    c.backoff_cap = std::chrono::milliseconds(j.value("backoff_cap_ms", static_cast<long>(c.backoff_cap.count())));
    c.max_in_flight = j.value("max_in_flight", c.max_in_flight);
    c.requests_per_second = j.value("requests_per_second", c.requests_per_second);
    c.fixture_dir = j.value("fixture_dir", c.fixture_dir);
    if (c.max_in_flight == 0) throw validation_error("BAD_CONFIG", "max_in_flight must be positive");
    if (c.context_budget_tokens == 0) throw validation_error("BAD_CONFIG", "context_budget_tokens must be positive");
    return c;
}

std::map<std::string, ModelConfig> default_profiles() {
    std::map<std::string, ModelConfig> p;
    ModelConfig mock;
    mock.provider = "mock";
    mock.model = "mock";
    mock.context_budget_tokens = 2'000'000;
    mock.requests_per_second = 0.0;
    p["mock"] = mock;

    ModelConfig gpt;
    gpt.provider = "openai";
    gpt.model = "gpt-4o";
    gpt.endpoint = "https://api.openai.com/v1/chat/completions";
    gpt.context_budget_tokens = 128'000;
    p["gpt-4o"] = gpt;

    for (const char* name : {"gemini-1.5-pro", "gemini-1.5-flash"}) {
        ModelConfig g;
        g.provider = "gemini";
        g.model = name;
        g.endpoint = "https://generativelanguage.googleapis.com/v1beta/openai/chat/completions";
        g.context_budget_tokens = 2'000'000;
        g.greedy_top_k = true;
        p[name] = g;
    }
    return p;
}

std::map<std::string, ModelConfig> load_profiles(const json& config) {
    auto profiles = default_profiles();
    if (!config.contains("profiles")) return profiles;
    for (const auto& [name, body] : config.at("profiles").items()) profiles[name] = model_config_from_json(body);
    return profiles;
}

std::map<std::string, ModelConfig> load_profiles(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw io_error("READ_FAILED", "cannot read config " + file.string());
    try {
        return load_profiles(json::parse(in));
    } catch (const json::exception& e) {
        throw validation_error("BAD_CONFIG", std::string("config is not valid JSON: ") + e.what());
    }
}

ProviderError::ProviderError(ProviderFailure failure, const std::string& message)
    : ProviderError(failure, message,
                    failure == ProviderFailure::RateLimit || failure == ProviderFailure::Server ||
                        failure == ProviderFailure::Transport) {}

ProviderError::ProviderError(ProviderFailure failure, const std::string& message, bool retryable)
    : Error(ErrorKind::Provider,
            [failure] {
                switch (failure) {
                    case ProviderFailure::Auth: return "AUTH_FAILED";
                    case ProviderFailure::RateLimit: return "RATE_LIMITED";
                    case ProviderFailure::ContextOverflow: return "CONTEXT_OVERFLOW";
                    case ProviderFailure::Transport: return "TRANSPORT_FAILED";
                    case ProviderFailure::Server: return "SERVER_ERROR";
                    case ProviderFailure::BadResponse: return "BAD_RESPONSE";
                }
                return "PROVIDER_ERROR";
            }(),
            message),
      failure_(failure),
      retryable_(retryable) {}

std::size_t estimate_tokens(std::string_view text) { return (text.size() + 3) / 4; }

std::string request_digest(const ModelConfig& config, std::string_view prompt) {
    const json key{{"provider", config.provider},
                   {"model", config.model},
                   {"decoding", config.decoding.greedy ? json("greedy") : json(config.decoding.temperature)},
                   {"prompt", prompt}};
    return sha256_hex(key.dump());
}

json chat_request_body(const ModelConfig& config, std::string_view prompt) {
    json body{{"model", config.model},
              {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
              {"max_tokens", config.max_output_tokens},
              {"n", 1}};
    if (config.decoding.greedy) {
        body["temperature"] = 0;
        if (config.greedy_top_k) body["top_k"] = 1;
    } else {
        body["temperature"] = config.decoding.temperature;
    }
    return body;
}

MockProvider::MockProvider(const fs::path& fixture_dir) {
    if (!fs::is_directory(fixture_dir)) throw io_error("NOT_A_DIRECTORY", "mock fixture directory missing: " + fixture_dir.string());
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(fixture_dir)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        const auto stem = f.stem().string();
        const bool is_digest = stem.size() == 64 && stem.find_first_not_of("0123456789abcdef") == std::string::npos;
        if (is_digest) {
            by_digest_[stem] = ss.str();
        } else {
            cycle_.push_back(ss.str());
        }
    }
}

MockProvider::MockProvider(std::vector<std::string> cycle) : cycle_(std::move(cycle)) {}

ProviderReply MockProvider::send(const ProviderRequest& request) {
    std::lock_guard lock(mu_);
    ++calls_;
    if (const auto it = by_digest_.find(std::string(request.digest)); it != by_digest_.end()) {
        return {it->second, request.config.model, std::nullopt};
    }
    if (cycle_.empty()) throw ProviderError(ProviderFailure::BadResponse, "mock provider has no fixture for this request");
    const auto& text = cycle_[next_ % cycle_.size()];
    ++next_;
    return {text, request.config.model, std::nullopt};
}

std::size_t MockProvider::calls() const {
    std::lock_guard lock(mu_);
    return calls_;
}

ProviderReply UnreachableProvider::send(const ProviderRequest&) {
    throw ProviderError(ProviderFailure::Transport, "provider contacted while running offline", false);
}

std::shared_ptr<Provider> make_provider(const ModelConfig& config) {
    if (config.provider == "mock") {
        if (config.fixture_dir.empty()) return std::make_shared<MockProvider>(std::vector<std::string>{});
        return std::make_shared<MockProvider>(fs::path(config.fixture_dir));
    }
    if (config.provider == "offline") return std::make_shared<UnreachableProvider>();
    return std::make_shared<HttpProvider>();
}

json ModelResponse::to_json() const {
    json j{{"text", text},         {"model", model}, {"request_digest", request_digest}, {"created_at", created_at},
           {"from_cache", from_cache}, {"trial", trial}};
    if (usage) j["usage"] = {{"prompt_tokens", usage->prompt_tokens}, {"completion_tokens", usage->completion_tokens}};
    return j;
}

ModelResponse ModelResponse::from_json(const json& j) {
    ModelResponse r;
    r.text = j.at("text").get<std::string>();
    r.model = j.value("model", "");
    r.request_digest = j.value("request_digest", "");
    r.created_at = j.value("created_at", "");
    r.from_cache = j.value("from_cache", false);
    r.trial = j.value("trial", std::size_t{0});
    if (j.contains("usage")) {
        r.usage = Usage{j["usage"].value("prompt_tokens", std::uint64_t{0}), j["usage"].value("completion_tokens", std::uint64_t{0})};
    }
    return r;
}

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {}

fs::path ResponseCache::path_for(const std::string& key) const { return dir_ / key.substr(0, 2) / (key + ".json"); }

std::optional<json> ResponseCache::get(const std::string& key) const {
    std::ifstream in(path_for(key), std::ios::binary);
    if (!in) return std::nullopt;
    try {
        return json::parse(in);
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

void ResponseCache::put(const std::string& key, const json& record) const {
    const auto target = path_for(key);
    fs::create_directories(target.parent_path());
    std::ostringstream tmp_name;
    tmp_name << target.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << '.'
             << std::random_device{}();
    const auto tmp = target.parent_path() / tmp_name.str();
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        out << record.dump(2) << '\n';
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw io_error("CACHE_WRITE_FAILED", "cannot write cache entry " + tmp.string());
        }
    }
    fs::rename(tmp, target);
}

std::string trial_key(const std::string& digest, std::size_t trial) {
    return trial == 0 ? digest : sha256_hex(digest + "#trial" + std::to_string(trial));
}

CacheMode cache_mode_from_string(const std::string& s) {
    if (s == "use") return CacheMode::Use;
    if (s == "bypass") return CacheMode::Bypass;
    throw validation_error("BAD_CACHE_MODE", "cache mode must be use or bypass, got " + s);
}

namespace {

std::string iso8601(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

Gateway::Gateway(std::shared_ptr<Provider> provider, std::optional<ResponseCache> cache, GatewayHooks hooks)
    : provider_(std::move(provider)), cache_(std::move(cache)), hooks_(std::move(hooks)) {
    if (!hooks_.sleep) hooks_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    if (!hooks_.now) hooks_.now = [] { return std::chrono::system_clock::now(); };
}

void Gateway::acquire_slot(const ModelConfig& config) {
    std::unique_lock lock(mu_);
    cv_.wait(lock, [&] { return in_flight_ < config.max_in_flight; });
    ++in_flight_;
    if (config.requests_per_second <= 0.0) return;
    const double capacity = std::max(1.0, config.requests_per_second);
    while (true) {
        const auto now = std::chrono::steady_clock::now();
        if (tokens_ < 0.0) {
            tokens_ = capacity;
        } else {
            const double elapsed = std::chrono::duration<double>(now - last_refill_).count();
            tokens_ = std::min(capacity, tokens_ + elapsed * config.requests_per_second);
        }
        last_refill_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const auto wait = std::chrono::milliseconds(
            static_cast<long>(std::ceil((1.0 - tokens_) / config.requests_per_second * 1000.0)));
        lock.unlock();
        hooks_.sleep(wait);
        lock.lock();
    }
}

void Gateway::release_slot() {
    {
        std::lock_guard lock(mu_);
        --in_flight_;
    }
    cv_.notify_one();
}

ModelResponse Gateway::dispatch(const std::string& prompt, const ModelConfig& config, const std::string& digest,
                                const std::string& key, std::size_t trial) {
    ProviderReply reply;
    for (int attempt = 0;; ++attempt) {
        acquire_slot(config);
        try {
            {
                std::lock_guard lock(mu_);
                ++provider_calls_;
            }
            reply = provider_->send(ProviderRequest{config, prompt, digest});
            release_slot();
            break;
        } catch (const ProviderError& e) {
            release_slot();
            if (!e.retryable() || attempt >= config.max_retries) throw;
            const auto factor = std::chrono::milliseconds::rep{1} << std::min(attempt, 20);
            hooks_.sleep(std::min(config.backoff_cap, config.backoff_base * factor));
        } catch (...) {
            release_slot();
            throw;
        }
    }

    ModelResponse r{std::move(reply.text), reply.model.empty() ? config.model : reply.model, digest,
                    iso8601(hooks_.now()), reply.usage, false, trial};
    if (cache_) {
        const json record{{"request", {{"provider", config.provider},
                                       {"model", config.model},
                                       {"decoding", config.summary()["decoding"]},
                                       {"prompt", prompt}}},
                          {"response", r.to_json()}};
        cache_->put(key, record);
    }
    return r;
}

ModelResponse Gateway::complete(const std::string& prompt, const ModelConfig& config) {
    const auto budget = estimate_tokens(prompt);
    if (budget > config.context_budget_tokens) {
        throw ProviderError(ProviderFailure::ContextOverflow,
                            "prompt needs ~" + std::to_string(budget) + " tokens, over the " +
                                std::to_string(config.context_budget_tokens) + "-token budget of " + config.model);
    }
    const auto digest = request_digest(config, prompt);
    if (cache_) {
        if (auto hit = cache_->get(digest)) {
            auto r = ModelResponse::from_json(hit->at("response"));
            r.from_cache = true;
            return r;
        }
    }
    return dispatch(prompt, config, digest, digest, 0);
}

RepeatedRun Gateway::run_repeated(const std::string& prompt, const ModelConfig& config, std::size_t k, CacheMode mode) {
    if (k == 0) throw validation_error("BAD_TRIALS", "run_repeated needs at least one trial");
    const auto budget = estimate_tokens(prompt);
    if (budget > config.context_budget_tokens) {
        throw ProviderError(ProviderFailure::ContextOverflow,
                            "prompt needs ~" + std::to_string(budget) + " tokens, over the " +
                                std::to_string(config.context_budget_tokens) + "-token budget of " + config.model);
    }
    const auto digest = request_digest(config, prompt);
    RepeatedRun run;
    for (std::size_t i = 0; i < k; ++i) {
        const auto key = trial_key(digest, i);
        try {
            if (mode == CacheMode::Use && cache_) {
                if (auto hit = cache_->get(key)) {
                    auto r = ModelResponse::from_json(hit->at("response"));
                    r.from_cache = true;
                    r.trial = i;
                    run.responses.push_back(std::move(r));
                    continue;
                }
            }
            run.responses.push_back(dispatch(prompt, config, digest, key, i));
        } catch (const Error& e) {
            run.errors.push_back("trial " + std::to_string(i) + ": " + e.what());
        }
    }
    return run;
}

fs::path cache_dir_from_env(const fs::path& fallback) {
    if (const char* env = std::getenv("TACO_CACHE_DIR"); env != nullptr && *env != '\0') return env;
    return fallback;
}

}  // namespace taco
