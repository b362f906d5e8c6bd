#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "taco/gateway.hpp"

#include <cctype>
#include <cstdlib>

namespace taco {

namespace {

std::string api_key_env(const std::string& provider) {
    std::string name = "TACO_";
    for (char c : provider) name.push_back(std::isalnum(static_cast<unsigned char>(c)) ? static_cast<char>(std::toupper(c)) : '_');
    return name + "_API_KEY";
}

struct Endpoint {
    std::string origin;  // scheme://host[:port]
    std::string path;
};

Endpoint split_endpoint(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw validation_error("BAD_ENDPOINT", "endpoint must be an absolute URL: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

ProviderReply HttpProvider::send(const ProviderRequest& request) {
    const auto& config = request.config;
    const auto env = api_key_env(config.provider);
    const char* key = std::getenv(env.c_str());
    if (key == nullptr || *key == '\0') throw ProviderError(ProviderFailure::Auth, "missing credentials: set " + env);
    if (config.endpoint.empty()) throw validation_error("BAD_ENDPOINT", "profile for " + config.model + " has no endpoint");

    const auto ep = split_endpoint(config.endpoint);
    httplib::Client client(ep.origin);
    const auto secs = config.timeout.count() / 1000;
    const auto usecs = (config.timeout.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    const httplib::Headers headers{{"Authorization", std::string("Bearer ") + key}};
    const auto body = chat_request_body(config, request.prompt).dump();
    const auto res = client.Post(ep.path, headers, body, "application/json");
    if (!res) throw ProviderError(ProviderFailure::Transport, "HTTP request failed: " + httplib::to_string(res.error()));
    if (res->status == 401 || res->status == 403) throw ProviderError(ProviderFailure::Auth, "provider rejected credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429) throw ProviderError(ProviderFailure::RateLimit, "rate limited (HTTP 429)");
    if (res->status >= 500) throw ProviderError(ProviderFailure::Server, "provider error (HTTP " + std::to_string(res->status) + ")");
    if (res->status != 200) throw ProviderError(ProviderFailure::BadResponse, "unexpected HTTP " + std::to_string(res->status) + ": " + res->body);

    try {
        const auto j = nlohmann::json::parse(res->body);
        ProviderReply reply;
        reply.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
        reply.model = j.value("model", config.model);
        if (j.contains("usage")) {
            const auto& u = j.at("usage");
            reply.usage = Usage{u.value("prompt_tokens", std::uint64_t{0}), u.value("completion_tokens", std::uint64_t{0})};
        }
        return reply;
    } catch (const nlohmann::json::exception& e) {
        throw ProviderError(ProviderFailure::BadResponse, std::string("malformed chat-completions response: ") + e.what());
    }
}

}  // namespace taco
