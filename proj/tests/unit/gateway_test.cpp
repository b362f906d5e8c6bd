#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include "support.hpp"

#include "taco/gateway.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <thread>

using namespace taco;
using taco::testing::TempDir;
using nlohmann::json;

namespace {

ModelConfig mock_config() {
    ModelConfig c;
    c.provider = "mock";
    c.model = "mock";
    c.requests_per_second = 0;
    c.context_budget_tokens = 1000;
    return c;
}

/// Fails with the given failure `failures` times, then answers.
class FlakyProvider : public Provider {
public:
    FlakyProvider(ProviderFailure f, int failures) : failure_(f), remaining_(failures) {}
    ProviderReply send(const ProviderRequest&) override {
        ++calls;
        if (remaining_-- > 0) throw ProviderError(failure_, "injected");
        return {"ok", "m", Usage{3, 4}};
    }
    int calls = 0;

private:
    ProviderFailure failure_;
    int remaining_;
};

}  // namespace

TEST(Gateway, MockReturnsFixtureText) {
    auto mock = std::make_shared<MockProvider>(std::vector<std::string>{"fixture text"});
    Gateway gw(mock, std::nullopt);
    auto r = gw.complete("prompt", mock_config());
    EXPECT_EQ(r.text, "fixture text");
    EXPECT_FALSE(r.from_cache);
    EXPECT_EQ(r.request_digest, request_digest(mock_config(), "prompt"));
}

TEST(Gateway, MockCyclesInOrder) {
    auto mock = std::make_shared<MockProvider>(std::vector<std::string>{"one", "two", "three"});
    Gateway gw(mock, std::nullopt);
    auto run = gw.run_repeated("p", mock_config(), 3, CacheMode::Bypass);
    ASSERT_EQ(run.responses.size(), 3u);
    EXPECT_EQ(run.responses[0].text, "one");
    EXPECT_EQ(run.responses[1].text, "two");
    EXPECT_EQ(run.responses[2].text, "three");
    EXPECT_EQ(run.responses[2].trial, 2u);
}

TEST(Gateway, MockDirectoryDigestLookup) {
    TempDir dir;
    const auto digest = request_digest(mock_config(), "special");
    taco::testing::write_file(dir / (digest + ".txt"), "by digest");
    taco::testing::write_file(dir / "a.txt", "cycled");
    Gateway gw(std::make_shared<MockProvider>(dir.path()), std::nullopt);
    EXPECT_EQ(gw.complete("special", mock_config()).text, "by digest");
    EXPECT_EQ(gw.complete("other", mock_config()).text, "cycled");
}

TEST(Gateway, SecondCallHitsCache) {
    TempDir dir;
    auto mock = std::make_shared<MockProvider>(std::vector<std::string>{"first", "second"});
    Gateway gw(mock, ResponseCache(dir.path()));
    auto a = gw.complete("prompt", mock_config());
    auto b = gw.complete("prompt", mock_config());
    EXPECT_FALSE(a.from_cache);
    EXPECT_TRUE(b.from_cache);
    EXPECT_EQ(a.text, b.text);
    EXPECT_EQ(mock->calls(), 1u);
    const auto path = ResponseCache(dir.path()).path_for(a.request_digest);
    EXPECT_EQ(path.parent_path().filename().string(), a.request_digest.substr(0, 2));
    auto record = json::parse(taco::testing::read_file(path));
    EXPECT_EQ(record["request"]["prompt"], "prompt");
}

TEST(Gateway, DigestDependsOnEveryField) {
    auto base = mock_config();
    const auto d = request_digest(base, "p");
    auto other = base;
    other.provider = "openai";
    EXPECT_NE(request_digest(other, "p"), d);
    other = base;
    other.model = "m2";
    EXPECT_NE(request_digest(other, "p"), d);
    other = base;
    other.decoding = Decoding{false, 0.7};
    EXPECT_NE(request_digest(other, "p"), d);
    EXPECT_NE(request_digest(base, "p "), d);
    other = base;
    other.timeout = std::chrono::milliseconds(5);
    EXPECT_EQ(request_digest(other, "p"), d);
}

TEST(Gateway, BypassRecordsTrialsAndUseReplaysThem) {
    TempDir dir;
    auto mock = std::make_shared<MockProvider>(std::vector<std::string>{"x", "y"});
    Gateway gw(mock, ResponseCache(dir.path()));
    auto fresh = gw.run_repeated("p", mock_config(), 2, CacheMode::Bypass);
    ASSERT_EQ(fresh.responses.size(), 2u);
    const auto digest = request_digest(mock_config(), "p");
    EXPECT_TRUE(ResponseCache(dir.path()).get(trial_key(digest, 1)).has_value());
    EXPECT_NE(trial_key(digest, 1), digest);
    EXPECT_EQ(trial_key(digest, 0), digest);

    Gateway offline(std::make_shared<UnreachableProvider>(), ResponseCache(dir.path()));
    auto replay = offline.run_repeated("p", mock_config(), 2, CacheMode::Use);
    EXPECT_TRUE(replay.errors.empty());
    ASSERT_EQ(replay.responses.size(), 2u);
    EXPECT_TRUE(replay.responses[0].from_cache);
    EXPECT_EQ(replay.responses[1].text, "y");
}

TEST(Gateway, WarmCacheSingleTrial) {
    TempDir dir;
    auto mock = std::make_shared<MockProvider>(std::vector<std::string>{"x"});
    Gateway gw(mock, ResponseCache(dir.path()));
    gw.complete("p", mock_config());
    auto run = gw.run_repeated("p", mock_config(), 1, CacheMode::Use);
    ASSERT_EQ(run.responses.size(), 1u);
    EXPECT_TRUE(run.responses[0].from_cache);
    EXPECT_EQ(mock->calls(), 1u);
}

TEST(Gateway, ZeroTrialsIsPreconditionError) {
    Gateway gw(std::make_shared<MockProvider>(std::vector<std::string>{"x"}), std::nullopt);
    EXPECT_THROW(gw.run_repeated("p", mock_config(), 0, CacheMode::Use), Error);
}

TEST(Gateway, PartialFailureKeepsCompletedTrials) {
    class SecondFails : public Provider {
    public:
        ProviderReply send(const ProviderRequest&) override {
            if (++n == 2) throw ProviderError(ProviderFailure::Auth, "denied");
            return {"r" + std::to_string(n), "m", std::nullopt};
        }
        int n = 0;
    };
    Gateway gw(std::make_shared<SecondFails>(), std::nullopt);
    auto run = gw.run_repeated("p", mock_config(), 3, CacheMode::Bypass);
    EXPECT_EQ(run.responses.size(), 2u);
    ASSERT_EQ(run.errors.size(), 1u);
    EXPECT_EQ(run.errors[0].rfind("trial 1:", 0), 0u);
}

TEST(Gateway, ContextOverflowNamesBudget) {
    auto cfg = default_profiles().at("gpt-4o");
    EXPECT_EQ(cfg.context_budget_tokens, 128000u);
    Gateway gw(std::make_shared<UnreachableProvider>(), std::nullopt);
    const std::string big(128000 * 4 + 8, 'a');
    try {
        gw.complete(big, cfg);
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_EQ(e.failure(), ProviderFailure::ContextOverflow);
        EXPECT_NE(std::string(e.what()).find("128000"), std::string::npos);
    }
}

TEST(Gateway, RetriesRateLimitWithBackoff) {
    auto flaky = std::make_shared<FlakyProvider>(ProviderFailure::RateLimit, 3);
    std::vector<long> sleeps;
    GatewayHooks hooks;
    hooks.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(static_cast<long>(d.count())); };
    Gateway gw(flaky, std::nullopt, hooks);
    auto cfg = mock_config();
    cfg.backoff_base = std::chrono::milliseconds(100);
    cfg.backoff_cap = std::chrono::milliseconds(250);
    auto r = gw.complete("p", cfg);
    EXPECT_EQ(r.text, "ok");
    EXPECT_EQ(flaky->calls, 4);
    EXPECT_EQ(sleeps, (std::vector<long>{100, 200, 250}));
}

TEST(Gateway, RetryCapSurfacesError) {
    auto flaky = std::make_shared<FlakyProvider>(ProviderFailure::Server, 100);
    GatewayHooks hooks;
    hooks.sleep = [](std::chrono::milliseconds) {};
    Gateway gw(flaky, std::nullopt, hooks);
    auto cfg = mock_config();
    cfg.max_retries = 2;
    EXPECT_THROW(gw.complete("p", cfg), ProviderError);
    EXPECT_EQ(flaky->calls, 3);
}

TEST(Gateway, AuthFailureIsNotRetried) {
    auto flaky = std::make_shared<FlakyProvider>(ProviderFailure::Auth, 1);
    Gateway gw(flaky, std::nullopt);
    try {
        gw.complete("p", mock_config());
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_EQ(e.failure(), ProviderFailure::Auth);
        EXPECT_EQ(exit_code_for(e.kind()), 3);
    }
    EXPECT_EQ(flaky->calls, 1);
}

TEST(Gateway, CacheFilesAreComplete) {
    TempDir dir;
    ResponseCache cache(dir.path());
    cache.put("abcdef", json{{"response", {{"text", "t"}}}});
    std::size_t files = 0;
    for (const auto& e : std::filesystem::recursive_directory_iterator(dir.path())) {
        if (!e.is_regular_file()) continue;
        ++files;
        EXPECT_EQ(e.path().extension(), ".json");
    }
    EXPECT_EQ(files, 1u);
    EXPECT_FALSE(cache.get("missing").has_value());
}

TEST(Gateway, GreedyRequestBody) {
    auto cfg = default_profiles().at("gemini-1.5-pro");
    EXPECT_EQ(cfg.context_budget_tokens, 2000000u);
    auto body = chat_request_body(cfg, "hello");
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(body["top_k"], 1);
    ASSERT_EQ(body["messages"].size(), 1u);
    EXPECT_EQ(body["messages"][0]["role"], "user");
    EXPECT_EQ(body["messages"][0]["content"], "hello");
}

TEST(Gateway, ProfilesFromJson) {
    auto profiles = load_profiles(json::parse(R"({"profiles":{"local":{"provider":"mock","model":"m",
        "decoding":{"mode":"temperature","temperature":0.3},"context_budget_tokens":50}}})"));
    ASSERT_TRUE(profiles.count("local"));
    EXPECT_FALSE(profiles["local"].decoding.greedy);
    EXPECT_DOUBLE_EQ(profiles["local"].decoding.temperature, 0.3);
    EXPECT_EQ(profiles["local"].context_budget_tokens, 50u);
    EXPECT_THROW(load_profiles(json::parse(R"({"profiles":{"x":{"decoding":"hot"}}})")), Error);
}

TEST(HttpProvider, TalksChatCompletions) {
    httplib::Server server;
    json seen;
    std::string auth;
    server.Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen = json::parse(req.body);
        auth = req.get_header_value("Authorization");
        res.set_content(R"({"model":"served","choices":[{"message":{"role":"assistant","content":"reply"}}],
                           "usage":{"prompt_tokens":5,"completion_tokens":1}})",
                        "application/json");
    });
    server.Post("/limited", [](const httplib::Request&, httplib::Response& res) { res.status = 429; });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread th([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    setenv("TACO_LOCALTEST_API_KEY", "secret", 1);
    ModelConfig cfg;
    cfg.provider = "localtest";
    cfg.model = "m";
    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/v1/chat/completions";
    cfg.timeout = std::chrono::milliseconds(5000);
    cfg.requests_per_second = 0;
    HttpProvider http;
    const auto digest = request_digest(cfg, "hi");
    auto reply = http.send({cfg, "hi", digest});
    EXPECT_EQ(reply.text, "reply");
    EXPECT_EQ(reply.model, "served");
    ASSERT_TRUE(reply.usage.has_value());
    EXPECT_EQ(reply.usage->prompt_tokens, 5u);
    EXPECT_EQ(auth, "Bearer secret");
    EXPECT_EQ(seen["messages"][0]["content"], "hi");
    EXPECT_EQ(seen["temperature"], 0.0);

    cfg.endpoint = "http://127.0.0.1:" + std::to_string(port) + "/limited";
    try {
        http.send({cfg, "hi", digest});
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_EQ(e.failure(), ProviderFailure::RateLimit);
    }

    unsetenv("TACO_LOCALTEST_API_KEY");
    try {
        http.send({cfg, "hi", digest});
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_EQ(e.failure(), ProviderFailure::Auth);
    }
    server.stop();
    th.join();
}

TEST(HttpProvider, TransportFailure) {
    setenv("TACO_LOCALTEST_API_KEY", "secret", 1);
    ModelConfig cfg;
    cfg.provider = "localtest";
    cfg.endpoint = "http://127.0.0.1:1/none";
    cfg.timeout = std::chrono::milliseconds(500);
    HttpProvider http;
    try {
        http.send({cfg, "hi", "d"});
        FAIL();
    } catch (const ProviderError& e) {
        EXPECT_EQ(e.failure(), ProviderFailure::Transport);
        EXPECT_TRUE(e.retryable());
    }
    unsetenv("TACO_LOCALTEST_API_KEY");
}
