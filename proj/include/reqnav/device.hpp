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

#ifndef REQNAV_DEVICE_HPP_
#define REQNAV_DEVICE_HPP_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/ui_model.hpp"

namespace reqnav {

/// Destination-state attribute edit carried by a transition. A value of
/// "$input" is replaced with the payload of the input-text action that fired
/// the transition.
struct AttributeEdit {
    enum class Op { kSet, kRemove };
    Selector selector;
    Op op = Op::kSet;
    std::string key;
    std::string value;
};

struct Transition {
    std::string id;
    std::string from;
    Selector selector; // ignored for back actions
    Action action;
    std::string to;
    std::vector<AttributeEdit> effects;
};

/// Declarative application: UI states plus deterministic transitions.
/// Immutable once loaded; shareable across sessions.
struct AppSpec {
    std::string app_id;
    std::string initial;
    std::map<std::string, UIState> states;
    std::vector<Transition> transitions;
    std::string variant = "correct"; // "correct" | "faulty:<mutation-id>"
};

AppSpec app_from_json(const nlohmann::json &j);
nlohmann::json app_to_json(const AppSpec &app);

/// Loads and validates an app spec file. Throws ParseError, SchemaError,
/// DanglingStateRef.
AppSpec load_app(const std::string &path);

/// Checks every AppSpec invariant: initial and transition endpoints exist,
/// and transition matching is deterministic per (state, element, action).
void validate_app(const AppSpec &app);

/// Mutations applied to an AppSpec to produce faulty variants. Targets are a
/// state-scoped element selector or a transition id, depending on the kind.
struct Mutation {
    enum class Kind { kRemoveElement, kCorruptLabel, kRetargetTransition, kNoopTransition, kDropEffect };
    std::string id;
    Kind kind = Kind::kRemoveElement;
    // remove-element / corrupt-label
    std::string state_id;
    Selector selector;
    std::string attr = "text"; // corrupt-label
    std::string value;         // corrupt-label
    // retarget / noop / drop-effect
    std::string transition_id;
    std::string new_to; // retarget
};

Mutation mutation_from_json(const nlohmann::json &j);

/// Applies the mutation, revalidates, and stamps the variant label. Throws
/// TargetNotFound when the mutation's target does not exist.
AppSpec apply_mutation(const AppSpec &app, const Mutation &m);

/// Parses a mutations file: {"<app-id>": [mutation, ...], ...}.
std::map<std::string, std::vector<Mutation>> mutations_from_json(const nlohmann::json &j);
std::map<std::string, std::vector<Mutation>> load_mutations(const std::string &path);

/// Exclusive, replayable handle on a running app. The observable state is the
/// destination state of the last transition with its effects applied and the
/// current scroll windows clipped in; scrollable containers expose "window"
/// and "item-count" attributes on the rendered view.
class DeviceSession {
public:
    explicit DeviceSession(std::shared_ptr<const AppSpec> app);

    const AppSpec &app() const { return *app_; }
    const std::string &current_state_id() const { return state_id_; }
    const UIState &current() const { return view_; }
    const std::vector<Operation> &trace() const { return trace_; }

    /// Performs one operation. A selector matching nothing raises
    /// SelectorUnresolved (back excepted); a matched element with no
    /// transition is a silent no-op. Returns the new current state.
    UIState perform(const Operation &op);

    /// Back to the initial state, trace cleared.
    UIState reset();

private:
    struct BoundEffects {
        std::vector<AttributeEdit> edits;
        std::string payload;
    };

    void rebuild_view();
    const Transition *match_transition(const ElementPath &acted, const Action &action) const;

    std::shared_ptr<const AppSpec> app_;
    std::string state_id_;
    BoundEffects arrival_;                 // effects of the transition that got us here
    std::map<std::string, int> scroll_;    // container path key -> window offset
    std::vector<Operation> trace_;
    UIState view_;
};

} // namespace reqnav

#endif // REQNAV_DEVICE_HPP_
