// Copyright 2026 The reqnav Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "reqnav/remote_scorer.hpp"

#include <atomic>
#include <functional>
#include <string>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "reqnav/oracle.hpp"
#include "reqnav/trigger.hpp"
#include "test_support.hpp"

using namespace reqnav;
using nlohmann::json;
using reqnav::testing::language_app;

namespace {

/// Stub scorer service for the wire-contract tests. Handlers are swapped per
/// test case.
class StubServer {
public:
    StubServer() {
        server_.Post("/v1/explore", [this](const httplib::Request &req, httplib::Response &res) {
            handle(explore_, req, res);
        });
        server_.Post("/v1/script", [this](const httplib::Request &req, httplib::Response &res) {
            handle(script_, req, res);
        });
        server_.Post("/v1/oracle", [this](const httplib::Request &req, httplib::Response &res) {
            handle(oracle_, req, res);
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    ~StubServer() {
        server_.stop();
        thread_.join();
    }

    std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

    using Handler = std::function<json(const json &)>;
    void on_explore(Handler h) { explore_ = std::move(h); }
    void on_script(Handler h) { script_ = std::move(h); }
    void on_oracle(Handler h) { oracle_ = std::move(h); }

    int requests_seen() const { return requests_.load(); }

private:
    void handle(const Handler &handler, const httplib::Request &req, httplib::Response &res) {
        ++requests_;
        if (!handler) {
            res.status = 404;
            return;
        }
        json reply = handler(json::parse(req.body));
        if (reply.is_string() && reply.get<std::string>() == "__raw_garbage__") {
            res.set_content("{not json", "application/json");
            return;
        }
        res.set_content(reply.dump(), "application/json");
    }

    httplib::Server server_;
    std::thread thread_;
    int port_ = 0;
    std::atomic<int> requests_{0};
    Handler explore_, script_, oracle_;
};

RemoteScorer::Options options_for(const StubServer &server) {
    RemoteScorer::Options options;
    options.endpoint = server.endpoint();
    options.timeout_ms = 2000;
    options.retries = 1;
    return options;
}

} // namespace

TEST(RemoteExplore, ParsesFixedReply) {
    StubServer server;
    server.on_explore([](const json &request) {
        EXPECT_EQ(request.at("k").get<int>(), 3);
        EXPECT_TRUE(request.contains("page"));
        EXPECT_TRUE(request.at("page").contains("children"));
        json reply;
        reply["is_entry"] = true;
        reply["candidates"] = json::array({{{"selector", {{"text", "Language"}}},
                                            {"action", {{"kind", "click"}}},
                                            {"level", 5},
                                            {"rationale", "literal match"}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    ExploreResult result =
        scorer.page_explore("Bengali please", app.states.at("settings"), 3);
    EXPECT_TRUE(result.is_entry);
    ASSERT_EQ(result.candidates.size(), 1u);
    EXPECT_EQ(result.candidates[0].atomic.level, 5);
    EXPECT_EQ(result.candidates[0].op.selector.text, "Language");
}

TEST(RemoteExplore, LevelOutOfRangeIsMalformed) {
    StubServer server;
    server.on_explore([](const json &) {
        json reply;
        reply["is_entry"] = false;
        reply["candidates"] = json::array({{{"selector", {{"text", "Language"}}},
                                            {"action", {{"kind", "click"}}},
                                            {"level", 7}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    EXPECT_THROW(scorer.page_explore("Bengali please", app.states.at("settings"), 3),
                 MalformedReply);
}

TEST(RemoteExplore, MisspelledSelectorIsRepairedAndKept) {
    StubServer server;
    server.on_explore([](const json &) {
        json reply;
        reply["is_entry"] = false;
        // "settings_lang" does not exist; fuzzy containment repairs it to the
        // real resource-id.
        reply["candidates"] = json::array({{{"selector", {{"resource-id", "settings_lang"}}},
                                            {"action", {{"kind", "click"}}},
                                            {"level", 4}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    ExploreResult result =
        scorer.page_explore("Bengali please", app.states.at("settings"), 3);
    ASSERT_EQ(result.candidates.size(), 1u);
    EXPECT_EQ(result.candidates[0].op.selector.resource_id, "settings_language");
}

TEST(RemoteExplore, UnrepairableCandidatesAreDropped) {
    StubServer server;
    server.on_explore([](const json &) {
        json reply;
        reply["is_entry"] = false;
        reply["candidates"] =
            json::array({{{"selector", {{"text", "zzz nowhere"}}},
                          {"action", {{"kind", "click"}}},
                          {"level", 3}},
                         {{"selector", {{"text", "Language"}}},
                          {"action", {{"kind", "click"}}},
                          {"level", 2}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    ExploreResult result =
        scorer.page_explore("Bengali please", app.states.at("settings"), 3);
    ASSERT_EQ(result.candidates.size(), 1u);
    EXPECT_EQ(result.candidates[0].op.selector.text, "Language");
}

TEST(RemoteExplore, GarbageBodyIsMalformedNotCrash) {
    StubServer server;
    server.on_explore([](const json &) { return json("__raw_garbage__"); });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    EXPECT_THROW(scorer.page_explore("Bengali please", app.states.at("settings"), 3),
                 MalformedReply);
}

TEST(RemoteExplore, EntryWithoutUsableTriggerIsMalformed) {
    StubServer server;
    server.on_explore([](const json &) {
        json reply;
        reply["is_entry"] = true;
        reply["candidates"] = json::array({{{"selector", {{"text", "zzz nowhere"}}},
                                            {"action", {{"kind", "click"}}},
                                            {"level", 5}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    EXPECT_THROW(scorer.page_explore("Bengali please", app.states.at("settings"), 3),
                 MalformedReply);
}

TEST(RemoteScorer, UnreachableEndpointSurfacesScorerUnavailable) {
    RemoteScorer::Options options;
    options.endpoint = "http://127.0.0.1:1"; // nothing listens there
    options.timeout_ms = 200;
    options.retries = 2;
    RemoteScorer scorer(options);
    AppSpec app = language_app(false);
    try {
        scorer.page_explore("Bengali please", app.states.at("settings"), 3);
        FAIL() << "expected ScorerUnavailable";
    } catch (const ScorerUnavailable &e) {
        EXPECT_EQ(e.attempts(), 3); // initial try plus two retries
    }
}

TEST(RemoteScript, StepsFeedTheExecutor) {
    StubServer server;
    server.on_script([](const json &request) {
        EXPECT_TRUE(request.contains("trigger_ops"));
        json steps = json::array();
        steps.push_back({{"assert",
                          {{"selector", {{"text", "Language"}}},
                           {"mode", "exists"},
                           {"message", "language row present"}}}});
        steps.push_back({{"act",
                          {{"selector", {{"resource-id", "settings_language"}}},
                           {"action", {{"kind", "click"}}}}}});
        steps.push_back({{"assert",
                          {{"selector", {{"text-matches", "(?i).*(Bengali|Bangla).*"}}},
                           {"mode", "exists"},
                           {"message", "bengali row present"},
                           {"scroll", true}}}});
        steps.push_back({{"act",
                          {{"selector", {{"text-matches", "(?i).*(Bengali|Bangla).*"}}},
                           {"action", {{"kind", "click"}}}}}});
        json reply;
        reply["steps"] = steps;
        return reply;
    });
    RemoteScorer scorer(options_for(server));

    AppSpec app = language_app(false);
    auto session_app = std::make_shared<const AppSpec>(app);
    DeviceSession session(session_app);
    std::vector<Operation> trigger_ops = {
        Operation{Selector::by_resource_id("settings_language"), Action::click()}};
    auto script = generate_script("Bengali please", session.current(), trigger_ops, scorer);
    ASSERT_EQ(script.size(), 4u);
    ExecutionOutcome outcome = execute_script(session, script);
    EXPECT_EQ(outcome.presence, PresenceVerdict::kConfirmed);
    EXPECT_EQ(session.current_state_id(), "settings");
}

TEST(RemoteScript, ScriptWithoutAssertionIsMalformed) {
    StubServer server;
    server.on_script([](const json &) {
        json reply;
        reply["steps"] = json::array({{{"act",
                                        {{"selector", {{"text", "Language"}}},
                                         {"action", {{"kind", "click"}}}}}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    std::vector<Operation> ops = {
        Operation{Selector::by_resource_id("settings_language"), Action::click()}};
    EXPECT_THROW(generate_script("Bengali please", app.states.at("settings"), ops, scorer),
                 MalformedReply);
}

TEST(RemoteOracle, SubOraclesValidatedAndRepaired) {
    StubServer server;
    server.on_oracle([](const json &request) {
        EXPECT_TRUE(request.contains("pre"));
        EXPECT_TRUE(request.contains("post"));
        EXPECT_EQ(request.at("eta").get<int>(), 3);
        json subs = json::array();
        // Misspelled resource-id, repairable against the post state.
        subs.push_back({{"selector", {{"resource-id", "current_lang"}}},
                        {"mode", "text-matches"},
                        {"pattern", "(?i).*(Bengali).*"},
                        {"target", "post"},
                        {"message", "switched language shows"}});
        subs.push_back({{"selector", {{"text", "Bengali"}}},
                        {"mode", "exists"},
                        {"target", "pre"},
                        {"message", "option existed"}});
        json reply;
        reply["sub_oracles"] = subs;
        return reply;
    });
    RemoteScorer scorer(options_for(server));

    AppSpec app = language_app(false);
    auto session_app = std::make_shared<const AppSpec>(app);
    DeviceSession session(session_app);
    LexicalScorer lexical;
    ExecutionOutcome outcome = iterate_until_complete(
        "I wish the app supported more language options, especially Bengali.", session,
        lexical, 3);
    ASSERT_EQ(outcome.presence, PresenceVerdict::kConfirmed);
    StatePair pair = capture_pre_post(app, {}, outcome.executed_ops);

    std::vector<SubOracle> oracle = generate_oracle("Bengali please", pair, 3, scorer);
    ASSERT_EQ(oracle.size(), 2u);
    EXPECT_EQ(oracle[0].assertion.selector.resource_id, "current_language");
    Verdict verdict = evaluate(oracle, pair);
    EXPECT_TRUE(verdict.pass);
}

TEST(RemoteOracle, BadTargetIsMalformed) {
    StubServer server;
    server.on_oracle([](const json &) {
        json reply;
        reply["sub_oracles"] = json::array({{{"selector", {{"text", "x"}}},
                                             {"mode", "exists"},
                                             {"target", "sideways"},
                                             {"message", "m"}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    StatePair pair{app.states.at("settings"), app.states.at("settings"), {}};
    EXPECT_THROW(generate_oracle("Bengali please", pair, 3, scorer), MalformedReply);
}

TEST(RemoteOracle, AllSubOraclesUnusableIsMalformed) {
    StubServer server;
    server.on_oracle([](const json &) {
        json reply;
        reply["sub_oracles"] = json::array({{{"selector", {{"text", "zzz nowhere"}}},
                                             {"mode", "exists"},
                                             {"target", "post"},
                                             {"message", "m"}}});
        return reply;
    });
    RemoteScorer scorer(options_for(server));
    AppSpec app = language_app(false);
    StatePair pair{app.states.at("settings"), app.states.at("settings"), {}};
    EXPECT_THROW(generate_oracle("Bengali please", pair, 3, scorer), MalformedReply);
}
