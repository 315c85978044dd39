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

#include "reqnav/navigator.hpp"

#include <cmath>
#include <set>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "bfs_oracle.hpp"
#include "reqnav/errors.hpp"
#include "test_support.hpp"

using namespace reqnav;
using reqnav::testing::bfs_entry_depth;
using reqnav::testing::button;
using reqnav::testing::click_transition;
using reqnav::testing::dark_mode_app;
using reqnav::testing::el;
using reqnav::testing::screen;

namespace {

const std::string kDarkModeReq = "I wish the app had a dark mode option.";

std::shared_ptr<const AppSpec> shared(AppSpec app) {
    return std::make_shared<const AppSpec>(std::move(app));
}

/// Five screens, nothing related to any requirement, every screen fully
/// clickable so the queue never starves.
AppSpec aimless_app() {
    AppSpec app;
    app.app_id = "mini_aimless";
    app.initial = "p0";
    for (int i = 0; i < 5; ++i) {
        std::string id = "p" + std::to_string(i);
        app.states.emplace(
            id, UIState(screen("Page " + std::to_string(i),
                               {button("Alpha" + std::to_string(i)),
                                button("Beta" + std::to_string(i)),
                                button("Delta" + std::to_string(i))}),
                        id));
    }
    for (int i = 0; i < 4; ++i) {
        app.transitions.push_back(click_transition(
            "t" + std::to_string(i), "p" + std::to_string(i),
            Selector::by_text("Alpha" + std::to_string(i)), "p" + std::to_string(i + 1)));
    }
    validate_app(app);
    return app;
}

/// Forces a backtrack: the decoy branch ties with the productive one and wins
/// the FIFO race, dead-ends, and the navigator must replay to home.
AppSpec backtrack_app() {
    AppSpec app;
    app.app_id = "mini_backtrack";
    app.initial = "home";
    app.states.emplace("home", UIState(screen("Home", {button("Preferences"), button("Settings"),
                                                       button("Feed")}),
                                       "home"));
    app.states.emplace("prefs",
                       UIState(screen("Preferences", {button("Licenses"), button("Imprint")}),
                               "prefs"));
    app.states.emplace("settings",
                       UIState(screen("Settings", {button("Appearance")}), "settings"));
    app.states.emplace("appearance",
                       UIState(screen("Appearance", {button("Dark mode")}), "appearance"));
    app.transitions.push_back(
        click_transition("t_prefs", "home", Selector::by_text("Preferences"), "prefs"));
    app.transitions.push_back(
        click_transition("t_settings", "home", Selector::by_text("Settings"), "settings"));
    app.transitions.push_back(click_transition("t_appearance", "settings",
                                               Selector::by_text("Appearance"), "appearance"));
    validate_app(app);
    return app;
}

} // namespace

// --- equivalent_state ---------------------------------------------------------

TEST(EquivalentState, EmptyHistoryIsFalse) {
    HistoryGraph history;
    Operation op{Selector::by_text("btnA"), Action::click()};
    EXPECT_FALSE(equivalent_state(history, 42, op));
}

TEST(EquivalentState, ExactDuplicateIsTrue) {
    HistoryGraph history;
    Operation op{Selector::by_text("btnA"), Action::click()};
    history.add_edge(42, operation_hash(op), 43);
    EXPECT_TRUE(equivalent_state(history, 42, op));
}

TEST(EquivalentState, DifferentOperationIsFalse) {
    HistoryGraph history;
    Operation a{Selector::by_text("btnA"), Action::click()};
    Operation b{Selector::by_text("btnB"), Action::click()};
    history.add_edge(42, operation_hash(a), 43);
    EXPECT_FALSE(equivalent_state(history, 42, b));
    EXPECT_FALSE(equivalent_state(history, 41, a)); // same op, other base
}

// --- replay ----------------------------------------------------------------------

namespace {

HistoryGraph record_walk(DeviceSession &session, const std::vector<Operation> &ops,
                         std::vector<std::uint64_t> &digests) {
    HistoryGraph history;
    session.reset();
    HistoryGraph::Node node;
    history.add_node(session.current().digest(), node);
    digests.push_back(session.current().digest());
    for (const Operation &op : ops) {
        UIState state = session.perform(op);
        digests.push_back(state.digest());
        HistoryGraph::Node next;
        next.path.assign(ops.begin(), ops.begin() + static_cast<long>(digests.size() - 1));
        next.path_digests.assign(digests.begin() + 1, digests.end());
        history.add_node(state.digest(), next);
    }
    return history;
}

} // namespace

TEST(Replay, TargetInitialIsJustReset) {
    DeviceSession session(shared(dark_mode_app()));
    std::vector<std::uint64_t> digests;
    HistoryGraph history = record_walk(session, {}, digests);
    session.perform(Operation{Selector::by_text("Setting"), Action::click()});
    UIState state = replay(session, history, digests[0]);
    EXPECT_EQ(state.digest(), digests[0]);
    EXPECT_TRUE(session.trace().empty());
}

TEST(Replay, DepthThreePathReplaysExactly) {
    DeviceSession session(shared(dark_mode_app()));
    std::vector<Operation> ops = {Operation{Selector::by_text("Setting"), Action::click()},
                                  Operation{Selector::by_text("Appearance"), Action::click()},
                                  Operation{Selector::by_text("Dark mode"), Action::click()}};
    std::vector<std::uint64_t> digests;
    HistoryGraph history = record_walk(session, ops, digests);
    session.reset();
    UIState state = replay(session, history, digests[3]);
    EXPECT_EQ(state.digest(), digests[3]);
    EXPECT_EQ(session.trace().size(), 3u);
}

TEST(Replay, DivergenceRaisesWithStepIndex) {
    DeviceSession session(shared(dark_mode_app()));
    std::vector<Operation> ops = {Operation{Selector::by_text("Setting"), Action::click()},
                                  Operation{Selector::by_text("Appearance"), Action::click()}};
    std::vector<std::uint64_t> digests;
    HistoryGraph history = record_walk(session, ops, digests);

    // Forge a history whose recorded digest cannot be reproduced, as a
    // nondeterministic app would.
    HistoryGraph forged;
    forged.add_node(digests[0], HistoryGraph::Node{});
    HistoryGraph::Node bad;
    bad.path = ops;
    bad.path_digests = {digests[1] ^ 1, digests[2]};
    forged.add_node(digests[2], bad);
    try {
        replay(session, forged, digests[2]);
        FAIL() << "expected ReplayDiverged";
    } catch (const ReplayDiverged &e) {
        EXPECT_EQ(e.step_index(), 0u);
    }
}

TEST(Replay, UnknownTargetRejected) {
    DeviceSession session(shared(dark_mode_app()));
    HistoryGraph history;
    EXPECT_THROW(replay(session, history, 99), ReplayDiverged);
}

// --- compute_score ------------------------------------------------------------

TEST(ComputeScore, SingleHopFromInitial) {
    HistoryGraph history;
    history.add_node(7, HistoryGraph::Node{});
    auto [score, gammas] = compute_score(0.8, history, 7);
    EXPECT_DOUBLE_EQ(score, 0.8);
    EXPECT_EQ(gammas, (std::vector<double>{0.8}));
}

TEST(ComputeScore, AppendsToPathGammas) {
    HistoryGraph history;
    HistoryGraph::Node node;
    node.gammas = {1.0};
    history.add_node(7, node);
    auto [score, gammas] = compute_score(0.2, history, 7);
    EXPECT_NEAR(score, std::sqrt(0.2), 1e-12);
    EXPECT_EQ(gammas, (std::vector<double>{1.0, 0.2}));
}

// --- navigate ------------------------------------------------------------------

TEST(Navigate, FindsDarkModeEntryWithinBudget) {
    LexicalScorer scorer;
    AppSpec app = dark_mode_app();
    DeviceSession session(shared(app));
    NavResult result = navigate(kDarkModeReq, session, 5, 3, scorer);
    ASSERT_TRUE(result.entry.has_value());
    ASSERT_TRUE(result.trigger_ops.has_value());
    EXPECT_FALSE(result.trigger_ops->empty());
    EXPECT_LE(result.steps_used, 3);
    EXPECT_FALSE(
        resolve_selector(*result.entry, Selector::by_resource_id("dark_mode_row")).empty());

    // The exhaustive oracle agrees the entry exists within depth 2.
    auto depth = bfs_entry_depth(app, kDarkModeReq, scorer);
    ASSERT_TRUE(depth.has_value());
    EXPECT_EQ(*depth, 2);
}

TEST(Navigate, ExhaustsBudgetOnHopelessRequirement) {
    LexicalScorer scorer;
    DeviceSession session(shared(aimless_app()));
    NavResult result = navigate("quantum flux polarity inverter", session, 5, 3, scorer);
    EXPECT_FALSE(result.entry.has_value());
    EXPECT_FALSE(result.trigger_ops.has_value());
    EXPECT_EQ(result.steps_used, 5);
}

TEST(Navigate, BacktracksViaReplayWhenDecoyDeadEnds) {
    LexicalScorer scorer;
    AppSpec app = backtrack_app();
    DeviceSession session(shared(app));
    std::vector<nlohmann::json> lines;
    NavResult result = navigate(kDarkModeReq, session, 5, 3, scorer,
                                [&lines](const nlohmann::json &j) { lines.push_back(j); });
    ASSERT_TRUE(result.entry.has_value());
    EXPECT_EQ(result.steps_used, 4); // launch, decoy, settings, appearance

    // The third pop expands from home again although the session sat on the
    // decoy page: that is the backtrack.
    std::set<std::uint64_t> new_states;
    for (const auto &line : lines) {
        if (line.contains("new_state")) {
            new_states.insert(line["new_state"].get<std::uint64_t>());
        }
    }
    EXPECT_GE(new_states.size(), 4u);
    auto oracle_depth = bfs_entry_depth(app, kDarkModeReq, scorer);
    ASSERT_TRUE(oracle_depth.has_value());
    EXPECT_EQ(*oracle_depth, 2);
}

TEST(Navigate, NoPairExpandedTwice) {
    LexicalScorer scorer;
    DeviceSession session(shared(aimless_app()));
    NavResult result = navigate("nothing to see here", session, 25, 3, scorer);
    EXPECT_FALSE(result.entry.has_value());
    // Every expansion appended a unique (base, op-hash) edge; the guard plus
    // map semantics keep them distinct by construction, so the edge count must
    // equal the number of non-skipped expansions.
    std::set<std::pair<std::uint64_t, std::uint64_t>> pairs;
    for (const auto &[key, dest] : result.history.edges()) {
        EXPECT_TRUE(pairs.insert(key).second);
    }
}

TEST(Navigate, PoppedScoresNeverIncreaseWithinBatch) {
    LexicalScorer scorer;
    DeviceSession session(shared(backtrack_app()));
    std::vector<double> popped;
    navigate(kDarkModeReq, session, 10, 3, scorer, [&popped](const nlohmann::json &j) {
        popped.push_back(j["popped"]["score"].get<double>());
    });
    // Scores pushed later may exceed earlier pops; but whenever no push
    // intervenes (equal-score FIFO run), order is non-increasing. The decoy
    // tie at 0.8 must pop before anything at 0.4.
    ASSERT_GE(popped.size(), 3u);
    EXPECT_DOUBLE_EQ(popped[0], 1.0);
    EXPECT_DOUBLE_EQ(popped[1], 0.8);
    EXPECT_DOUBLE_EQ(popped[2], 0.8);
}

TEST(Navigate, StepBudgetCountsSkippedPops) {
    // Two transitions into the same state create a duplicate queue entry:
    // the skip still consumes a step.
    LexicalScorer scorer;
    AppSpec app;
    app.app_id = "mini_dup";
    app.initial = "home";
    app.states.emplace("home",
                       UIState(screen("Home", {button("Alpha"), button("Beta")}), "home"));
    app.states.emplace("other", UIState(screen("Other", {button("Gamma")}), "other"));
    app.transitions.push_back(
        click_transition("ta", "home", Selector::by_text("Alpha"), "other"));
    app.transitions.push_back(
        click_transition("tb", "home", Selector::by_text("Beta"), "other"));
    validate_app(app);
    DeviceSession session(shared(std::move(app)));
    NavResult result = navigate("unrelated requirement", session, 8, 3, scorer);
    EXPECT_FALSE(result.entry.has_value());
    EXPECT_LE(result.steps_used, 8);
}
