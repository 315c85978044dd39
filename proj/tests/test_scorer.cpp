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

#include "reqnav/scorer.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "test_support.hpp"

using namespace reqnav;
using reqnav::testing::button;
using reqnav::testing::el;
using reqnav::testing::label;
using reqnav::testing::screen;

namespace {

Operation op_on_text(const UIState &state, const std::string &text) {
    auto matches = resolve_selector(state, Selector::by_text(text));
    EXPECT_FALSE(matches.empty()) << text;
    return Operation{build_selector(state, matches.front()), Action::click()};
}

} // namespace

// --- path_score ---------------------------------------------------------------

TEST(PathScore, IdentityOnAllOnes) {
    EXPECT_DOUBLE_EQ(path_score({1.0, 1.0, 1.0}), 1.0);
}

TEST(PathScore, SingleElementPath) {
    EXPECT_DOUBLE_EQ(path_score({0.6}), 0.6);
}

TEST(PathScore, GeometricMeanByHand) {
    // sqrt(0.8 * 0.2) = sqrt(0.16) = 0.4
    EXPECT_NEAR(path_score({0.8, 0.2}), 0.4, 1e-12);
}

TEST(PathScore, EmptyPathThrows) {
    EXPECT_THROW(path_score({}), EmptyPath);
}

TEST(PathScore, OutOfDomainGammaRejected) {
    EXPECT_THROW(path_score({0.1}), std::invalid_argument);
    EXPECT_THROW(path_score({1.4}), std::invalid_argument);
}

TEST(PathScore, MonotoneUnderAppendAndDamping) {
    std::mt19937_64 rng(20260809);
    std::uniform_int_distribution<int> level(1, 5);
    std::uniform_int_distribution<int> length(1, 8);
    const double tol = 1e-12;
    for (int trial = 0; trial < 10000; ++trial) {
        std::vector<double> gammas;
        int d = length(rng);
        for (int i = 0; i < d; ++i) {
            gammas.push_back(level(rng) / 5.0);
        }
        double score = path_score(gammas);

        // Appending gamma above/below/equal to the current mean moves the
        // mean strictly up/down/not at all.
        for (double appended : {0.2, 0.6, 1.0}) {
            std::vector<double> extended = gammas;
            extended.push_back(appended);
            double next = path_score(extended);
            if (appended > score + tol) {
                ASSERT_GT(next, score - tol);
                ASSERT_GT(next, score);
            } else if (appended < score - tol) {
                ASSERT_LT(next, score);
            } else {
                ASSERT_NEAR(next, score, 1e-9);
            }
        }

        // Lowering any coordinate strictly lowers the score.
        std::uniform_int_distribution<int> pick(0, d - 1);
        int i = pick(rng);
        if (gammas[i] > 0.2) {
            std::vector<double> lowered = gammas;
            lowered[i] -= 0.2;
            ASSERT_LT(path_score(lowered), score - tol);
        }
    }
}

// --- atomic levels -------------------------------------------------------------

TEST(AtomicScore, LiteralEquivalenceIsLevelFive) {
    LexicalScorer scorer;
    UIState state(screen("Appearance", {button("Dark mode")}));
    RelevanceLevel level = scorer.atomic_score("I wish the app had a dark mode option.", state,
                                               op_on_text(state, "Dark mode"));
    EXPECT_EQ(level.level, 5);
    EXPECT_DOUBLE_EQ(level.gamma(), 1.0);
}

TEST(AtomicScore, SettingsScoresLevelFourForOptionRequirements) {
    LexicalScorer scorer;
    UIState state(screen("Home", {button("Settings"), button("Feed"), button("Profile")}));
    RelevanceLevel level = scorer.atomic_score("I wish the app had a dark mode option.", state,
                                               op_on_text(state, "Settings"));
    EXPECT_EQ(level.level, 4);
    EXPECT_DOUBLE_EQ(level.gamma(), 0.8);
}

TEST(AtomicScore, GenericAggregationIsLevelTwo) {
    LexicalScorer scorer;
    UIState state(screen("Home", {button("More"), button("Feed")}));
    RelevanceLevel level = scorer.atomic_score("I want a share button for rounds.", state,
                                               op_on_text(state, "More"));
    EXPECT_EQ(level.level, 2);
    EXPECT_DOUBLE_EQ(level.gamma(), 0.4);
}

TEST(AtomicScore, UnrelatedElementIsLevelOne) {
    LexicalScorer scorer;
    UIState state(screen("Edit", {button("Crop photo")}));
    RelevanceLevel level = scorer.atomic_score("I want a picture resizing feature.", state,
                                               op_on_text(state, "Crop photo"));
    // "Crop photo" reaches level 4 only through the synonym table; with
    // synonyms stripped it is unrelated.
    LexicalScorer no_synonyms{Lexicon::from_json(nlohmann::json::object())};
    RelevanceLevel bare = no_synonyms.atomic_score("I want a picture resizing feature.", state,
                                                   op_on_text(state, "Crop photo"));
    EXPECT_EQ(level.level, 4);
    EXPECT_EQ(bare.level, 1);
    EXPECT_DOUBLE_EQ(bare.gamma(), 0.2);
}

TEST(AtomicScore, ContainerOfStrongElementIsLevelThree) {
    LexicalScorer scorer;
    UIElement list = el({{"class", "android.widget.ListView"}, {"resource-id", "rows"},
                         {"clickable", "true"}},
                        {button("Dark mode")});
    UIState state(el({{"class", "root"}}, {list}));
    Operation op{Selector::by_resource_id("rows"), Action::click()};
    RelevanceLevel level =
        scorer.atomic_score("I wish the app had a dark mode toggle.", state, op);
    EXPECT_EQ(level.level, 3);
}

TEST(AtomicScore, PureFunctionOfInputs) {
    LexicalScorer scorer;
    UIState state(screen("Home", {button("Settings")}));
    Operation op = op_on_text(state, "Settings");
    const std::string req = "I wish the app had a dark mode option.";
    EXPECT_EQ(scorer.atomic_score(req, state, op).level,
              scorer.atomic_score(req, state, op).level);
}

TEST(AtomicScore, GammaLevelCoupling) {
    for (int level = 1; level <= 5; ++level) {
        RelevanceLevel r{level};
        double scaled = r.gamma() * 5.0;
        EXPECT_NEAR(scaled, level, 1e-12);
    }
}

// --- page_explore ----------------------------------------------------------------

TEST(PageExplore, LanguageListWithBengaliIsEntry) {
    LexicalScorer scorer;
    UIState state(screen("Select language",
                         {button("English"), button("German"), button("Bengali")}));
    ExploreResult result = scorer.page_explore(
        "I wish the app supported more language options, especially Bengali.", state, 3);
    EXPECT_TRUE(result.is_entry);
    ASSERT_FALSE(result.candidates.empty());
    EXPECT_EQ(result.candidates[0].atomic.level, 5);
    EXPECT_EQ(result.candidates[0].op.selector.text, "Bengali");
}

TEST(PageExplore, NoInteractablesMeansNoEntryAndNoCandidates) {
    LexicalScorer scorer;
    UIState state(screen("About", {label("Version 1.0"), label("Licenses")}));
    ExploreResult result = scorer.page_explore("anything at all", state, 3);
    EXPECT_FALSE(result.is_entry);
    EXPECT_TRUE(result.candidates.empty());
}

TEST(PageExplore, CandidatesLedBySettingsAtLevelFour) {
    LexicalScorer scorer;
    UIState state(screen("Home", {button("Settings"), button("Feed"), button("Profile")}));
    ExploreResult result =
        scorer.page_explore("I wish the app had a dark mode option.", state, 3);
    EXPECT_FALSE(result.is_entry);
    ASSERT_EQ(result.candidates.size(), 3u);
    EXPECT_EQ(result.candidates[0].op.selector.text, "Settings");
    EXPECT_EQ(result.candidates[0].atomic.level, 4);
    // Ties broken by document order.
    EXPECT_EQ(result.candidates[1].op.selector.text, "Feed");
    EXPECT_EQ(result.candidates[2].op.selector.text, "Profile");
}

TEST(PageExplore, HonorsCandidateBudget) {
    LexicalScorer scorer;
    UIState state(screen("Home", {button("Settings"), button("Feed"), button("Profile"),
                                  button("Help")}));
    ExploreResult result =
        scorer.page_explore("I wish the app had a dark mode option.", state, 2);
    EXPECT_EQ(result.candidates.size(), 2u);
}

TEST(PageExplore, EditableFieldsProposeInputWithQuotedPayload) {
    LexicalScorer scorer;
    UIElement field = el({{"class", "android.widget.EditText"},
                          {"resource-id", "search_input"},
                          {"content-desc", "Search"}});
    UIState state(el({{"class", "root"}}, {field}));
    ExploreResult result = scorer.page_explore(
        "I want to search within the current page for \"kyoto\".", state, 3);
    ASSERT_TRUE(result.is_entry);
    ASSERT_EQ(result.candidates.size(), 1u);
    EXPECT_EQ(result.candidates[0].op.action.kind, ActionKind::kInputText);
    EXPECT_EQ(result.candidates[0].op.action.payload, "kyoto");
}

TEST(PageExplore, DisabledElementsAreNotCandidates) {
    LexicalScorer scorer;
    UIElement disabled = el({{"class", "android.widget.Button"},
                             {"text", "Bengali"},
                             {"clickable", "true"},
                             {"enabled", "false"}});
    UIState state(el({{"class", "root"}}, {disabled}));
    ExploreResult result = scorer.page_explore("Bengali language support please", state, 3);
    EXPECT_FALSE(result.is_entry);
    EXPECT_TRUE(result.candidates.empty());
}
