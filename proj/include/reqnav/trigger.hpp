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

#ifndef REQNAV_TRIGGER_HPP_
#define REQNAV_TRIGGER_HPP_

#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/device.hpp"
#include "reqnav/scorer.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav {

struct Assertion {
    enum class Mode { kExists, kAbsent, kTextMatches, kAttrEquals };

    Selector selector;
    Mode mode = Mode::kExists;
    std::string pattern;    // text-matches
    std::string attr_key;   // attr-equals
    std::string attr_value; // attr-equals
    std::string message;    // non-empty failure diagnostic
};

/// One script step: perform an operation or check an assertion. An assert
/// step with `scroll_until` keeps scrolling the first scrollable container
/// and re-evaluating, bounded by the container's item count.
struct ScriptStep {
    struct Act {
        Operation op;
    };
    struct Assert {
        Assertion assertion;
        bool scroll_until = false;
    };
    std::variant<Act, Assert> step;

    static ScriptStep act(Operation op) { return {Act{std::move(op)}}; }
    static ScriptStep check(Assertion a, bool scroll_until = false) {
        return {Assert{std::move(a), scroll_until}};
    }
    bool is_act() const { return std::holds_alternative<Act>(step); }
};

struct AssertionResult {
    Assertion assertion;
    bool pass = false;
};

enum class PresenceVerdict { kConfirmed, kAbsent };

struct ExecutionOutcome {
    UIState reached;                               // s'' at the end of execution
    std::vector<Operation> executed_ops;           // Op', the trace delta
    std::vector<AssertionResult> assertion_results;
    PresenceVerdict presence = PresenceVerdict::kAbsent;
};

/// Evaluates one assertion against a state. Selector failures are assertion
/// failures, never errors.
bool evaluate_assertion(const UIState &state, const Assertion &a);

/// Deterministic script planner. Emits [assert exists; act] for each trigger
/// operation; when none of them touches the requirement evidence, appends a
/// scroll-until evidence assertion plus a click on the matching element; a
/// removal requirement closes with an absent assertion on the item being
/// removed, other direct-trigger scripts close with an evidence assertion.
/// Remote scorers answer via /v1/script; replies are validated and repaired.
/// Throws UnplannableRequirement when no terminal assertion is derivable.
std::vector<ScriptStep> generate_script(const std::string &requirement,
                                        const UIState &state,
                                        const std::vector<Operation> &trigger_ops,
                                        const Scorer &scorer,
                                        const std::string &removal_target_regex = "");

/// Runs the script on the session. Assertion failure short-circuits with an
/// absent verdict; act selectors that stop resolving are routed through the
/// selector refiner and recorded as failed assertions when unrepairable.
/// `max_scroll_iters` of 0 bounds scroll-until loops by container length.
ExecutionOutcome execute_script(DeviceSession &session,
                                const std::vector<ScriptStep> &script,
                                int max_scroll_iters = 0);

/// Alternates script generation and execution from the session's current
/// state until a round confirms the completion condition, the current state
/// stops offering trigger operations, or `max_rounds` is exhausted. Returns
/// the accumulated outcome; executed_ops spans all rounds.
ExecutionOutcome iterate_until_complete(const std::string &requirement,
                                        DeviceSession &session, const Scorer &scorer,
                                        int max_rounds, int candidates = 3);

/// Identifies what a removal requirement should make disappear: tokens of the
/// trigger element (or of its enclosing row's visible text) that are not part
/// of the requirement itself, rendered as a match regex. Empty when nothing
/// distinguishes the target.
std::string removal_target_regex(const std::string &requirement, const UIState &state,
                                 const std::vector<Operation> &trigger_ops,
                                 const Lexicon &lexicon);

nlohmann::json script_to_json(const std::vector<ScriptStep> &script);
std::vector<ScriptStep> script_from_json(const nlohmann::json &j);
nlohmann::json assertion_to_json(const Assertion &a);
Assertion assertion_from_json(const nlohmann::json &j);

} // namespace reqnav

#endif // REQNAV_TRIGGER_HPP_
