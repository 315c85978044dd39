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

#include "reqnav/device.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"

namespace reqnav {

using nlohmann::json;

namespace {

UIElement *mutable_at(UIElement &root, const ElementPath &path) {
    UIElement *cur = &root;
    for (int idx : path) {
        if (idx < 0 || static_cast<size_t>(idx) >= cur->children.size()) {
            return nullptr;
        }
        cur = &cur->children[static_cast<size_t>(idx)];
    }
    return cur;
}

bool action_matches(const Action &transition_action, const Action &performed) {
    if (transition_action.kind != performed.kind) {
        return false;
    }
    if (performed.kind == ActionKind::kSwipe || performed.kind == ActionKind::kScroll) {
        return transition_action.direction == performed.direction;
    }
    // input-text transitions fire for any payload; the payload feeds effects.
    return true;
}

std::optional<std::pair<int, int>> parse_window(const UIElement &elem) {
    const std::string *w = elem.attr("window");
    if (w == nullptr) {
        return std::nullopt;
    }
    std::istringstream in(*w);
    int start = 0, count = 0;
    char comma = 0;
    if (!(in >> start >> comma >> count) || comma != ',' || count <= 0 || start < 0) {
        return std::nullopt;
    }
    return std::make_pair(start, count);
}

std::string path_key(const ElementPath &path) {
    std::string key;
    for (int idx : path) {
        key += std::to_string(idx);
        key += '.';
    }
    return key;
}

void apply_windows(UIElement &elem, ElementPath &path,
                   const std::map<std::string, int> &scroll) {
    if (auto window = parse_window(elem)) {
        auto [start, count] = *window;
        int total = static_cast<int>(elem.children.size());
        auto it = scroll.find(path_key(path));
        int max_start = std::max(0, total - count);
        // A scroll entry holds the absolute window position, overriding the
        // authored start.
        int effective = std::clamp(it == scroll.end() ? start : it->second, 0, max_start);
        int end = std::min(total, effective + count);
        std::vector<UIElement> visible(elem.children.begin() + effective,
                                       elem.children.begin() + end);
        elem.children = std::move(visible);
        elem.attrs["window"] = std::to_string(effective) + "," + std::to_string(count);
        elem.attrs["item-count"] = std::to_string(total);
    }
    for (size_t i = 0; i < elem.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        apply_windows(elem.children[i], path, scroll);
        path.pop_back();
    }
}

} // namespace

// --- JSON forms -----------------------------------------------------------------

namespace {

AttributeEdit edit_from_json(const json &j) {
    AttributeEdit edit;
    if (!j.is_object() || !j.contains("selector")) {
        throw ParseError("effect must carry a selector");
    }
    edit.selector = selector_from_json(j["selector"]);
    if (j.contains("set")) {
        edit.op = AttributeEdit::Op::kSet;
        edit.key = j["set"].at("key").get<std::string>();
        edit.value = j["set"].at("value").get<std::string>();
    } else if (j.contains("remove")) {
        edit.op = AttributeEdit::Op::kRemove;
        edit.key = j["remove"].get<std::string>();
    } else {
        throw ParseError("effect must carry 'set' or 'remove'");
    }
    return edit;
}

json edit_to_json(const AttributeEdit &edit) {
    json j;
    j["selector"] = selector_to_json(edit.selector);
    if (edit.op == AttributeEdit::Op::kSet) {
        j["set"] = {{"key", edit.key}, {"value", edit.value}};
    } else {
        j["remove"] = edit.key;
    }
    return j;
}

} // namespace

AppSpec app_from_json(const json &j) {
    if (!j.is_object()) {
        throw ParseError("app spec must be a JSON object");
    }
    AppSpec app;
    try {
        app.app_id = j.at("app_id").get<std::string>();
        app.initial = j.at("initial").get<std::string>();
        app.variant = j.value("variant", "correct");
        if (!j.contains("states") || !j["states"].is_object()) {
            throw SchemaError("states", "missing or not an object");
        }
        for (auto it = j["states"].begin(); it != j["states"].end(); ++it) {
            app.states.emplace(it.key(), UIState(ui_tree_from_json(it.value()), it.key()));
        }
        int index = 0;
        for (const json &tj : j.value("transitions", json::array())) {
            Transition t;
            t.id = tj.value("id", "t" + std::to_string(index));
            t.from = tj.at("from").get<std::string>();
            t.to = tj.at("to").get<std::string>();
            t.action = action_from_json(tj.at("action"));
            if (t.action.kind != ActionKind::kBack) {
                t.selector = selector_from_json(tj.at("selector"));
            }
            for (const json &ej : tj.value("effects", json::array())) {
                t.effects.push_back(edit_from_json(ej));
            }
            app.transitions.push_back(std::move(t));
            ++index;
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("app spec: ") + e.what());
    }
    validate_app(app);
    return app;
}

json app_to_json(const AppSpec &app) {
    json j;
    j["app_id"] = app.app_id;
    j["variant"] = app.variant;
    j["initial"] = app.initial;
    j["states"] = json::object();
    for (const auto &[id, state] : app.states) {
        j["states"][id] = ui_tree_to_json(state.root());
    }
    j["transitions"] = json::array();
    for (const Transition &t : app.transitions) {
        json tj;
        tj["id"] = t.id;
        tj["from"] = t.from;
        tj["to"] = t.to;
        tj["action"] = action_to_json(t.action);
        if (t.action.kind != ActionKind::kBack) {
            tj["selector"] = selector_to_json(t.selector);
        }
        if (!t.effects.empty()) {
            tj["effects"] = json::array();
            for (const AttributeEdit &e : t.effects) {
                tj["effects"].push_back(edit_to_json(e));
            }
        }
        j["transitions"].push_back(std::move(tj));
    }
    return j;
}

AppSpec load_app(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IOError("cannot open app spec: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ParseError(path + ": " + e.what());
    }
    return app_from_json(j);
}

void validate_app(const AppSpec &app) {
    if (app.app_id.empty()) {
        throw SchemaError("app_id", "must be non-empty");
    }
    if (app.states.find(app.initial) == app.states.end()) {
        throw DanglingStateRef(app.initial);
    }
    for (const Transition &t : app.transitions) {
        if (app.states.find(t.from) == app.states.end()) {
            throw DanglingStateRef(t.from);
        }
        if (app.states.find(t.to) == app.states.end()) {
            throw DanglingStateRef(t.to);
        }
    }
    // Determinism: within a state, no two transitions with compatible actions
    // may claim the same element.
    for (const auto &[state_id, state] : app.states) {
        std::vector<const Transition *> from_here;
        for (const Transition &t : app.transitions) {
            if (t.from == state_id) {
                from_here.push_back(&t);
            }
        }
        for (size_t i = 0; i < from_here.size(); ++i) {
            for (size_t j = i + 1; j < from_here.size(); ++j) {
                const Transition &a = *from_here[i];
                const Transition &b = *from_here[j];
                if (!action_matches(a.action, b.action)) {
                    continue;
                }
                if (a.action.kind == ActionKind::kBack) {
                    throw SchemaError("transitions",
                                      "two back transitions from state " + state_id);
                }
                auto ma = resolve_selector(state, a.selector);
                auto mb = resolve_selector(state, b.selector);
                for (const ElementPath &pa : ma) {
                    if (std::find(mb.begin(), mb.end(), pa) != mb.end()) {
                        throw SchemaError("transitions", "transitions " + a.id + " and " +
                                                             b.id + " overlap in state " +
                                                             state_id);
                    }
                }
            }
        }
    }
}

// --- mutations ------------------------------------------------------------------

Mutation mutation_from_json(const json &j) {
    Mutation m;
    try {
        m.id = j.at("id").get<std::string>();
        const std::string kind = j.at("kind").get<std::string>();
        if (kind == "remove-element") {
            m.kind = Mutation::Kind::kRemoveElement;
            m.state_id = j.at("state").get<std::string>();
            m.selector = selector_from_json(j.at("selector"));
        } else if (kind == "corrupt-label") {
            m.kind = Mutation::Kind::kCorruptLabel;
            m.state_id = j.at("state").get<std::string>();
            m.selector = selector_from_json(j.at("selector"));
            m.attr = j.value("attr", "text");
            m.value = j.at("value").get<std::string>();
        } else if (kind == "retarget-transition") {
            m.kind = Mutation::Kind::kRetargetTransition;
            m.transition_id = j.at("transition").get<std::string>();
            m.new_to = j.at("to").get<std::string>();
        } else if (kind == "noop-transition") {
            m.kind = Mutation::Kind::kNoopTransition;
            m.transition_id = j.at("transition").get<std::string>();
        } else if (kind == "drop-effect") {
            m.kind = Mutation::Kind::kDropEffect;
            m.transition_id = j.at("transition").get<std::string>();
        } else {
            throw ParseError("unknown mutation kind: " + kind);
        }
    } catch (const json::exception &e) {
        throw ParseError(std::string("mutation: ") + e.what());
    }
    return m;
}

std::map<std::string, std::vector<Mutation>> mutations_from_json(const json &j) {
    if (!j.is_object()) {
        throw ParseError("mutations file must map app ids to mutation lists");
    }
    std::map<std::string, std::vector<Mutation>> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        std::vector<Mutation> list;
        for (const json &mj : it.value()) {
            list.push_back(mutation_from_json(mj));
        }
        out.emplace(it.key(), std::move(list));
    }
    return out;
}

std::map<std::string, std::vector<Mutation>> load_mutations(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IOError("cannot open mutations file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ParseError(path + ": " + e.what());
    }
    return mutations_from_json(j);
}

namespace {

Transition *find_transition(AppSpec &app, const std::string &id) {
    for (Transition &t : app.transitions) {
        if (t.id == id) {
            return &t;
        }
    }
    return nullptr;
}

} // namespace

AppSpec apply_mutation(const AppSpec &app, const Mutation &m) {
    AppSpec out = app;
    switch (m.kind) {
    case Mutation::Kind::kRemoveElement: {
        auto it = out.states.find(m.state_id);
        if (it == out.states.end()) {
            throw TargetNotFound("state " + m.state_id);
        }
        auto matches = resolve_selector(it->second, m.selector);
        // The root is not removable; dropping it would leave no state tree.
        matches.erase(std::remove_if(matches.begin(), matches.end(),
                                     [](const ElementPath &p) { return p.empty(); }),
                      matches.end());
        if (matches.empty()) {
            throw TargetNotFound("no removable element matches in state " + m.state_id);
        }
        UIElement root = it->second.root();
        // Deepest-last paths first so earlier removals cannot shift later ones.
        std::sort(matches.begin(), matches.end(),
                  [](const ElementPath &a, const ElementPath &b) { return a > b; });
        for (const ElementPath &path : matches) {
            ElementPath parent_path(path.begin(), path.end() - 1);
            UIElement *parent = mutable_at(root, parent_path);
            if (parent != nullptr) {
                parent->children.erase(parent->children.begin() + path.back());
            }
        }
        it->second = UIState(std::move(root), m.state_id);
        break;
    }
    case Mutation::Kind::kCorruptLabel: {
        auto it = out.states.find(m.state_id);
        if (it == out.states.end()) {
            throw TargetNotFound("state " + m.state_id);
        }
        auto matches = resolve_selector(it->second, m.selector);
        if (matches.empty()) {
            throw TargetNotFound("no element matches in state " + m.state_id);
        }
        UIElement root = it->second.root();
        for (const ElementPath &path : matches) {
            mutable_at(root, path)->attrs[m.attr] = m.value;
        }
        it->second = UIState(std::move(root), m.state_id);
        break;
    }
    case Mutation::Kind::kRetargetTransition: {
        Transition *t = find_transition(out, m.transition_id);
        if (t == nullptr) {
            throw TargetNotFound("transition " + m.transition_id);
        }
        t->to = m.new_to;
        break;
    }
    case Mutation::Kind::kNoopTransition: {
        Transition *t = find_transition(out, m.transition_id);
        if (t == nullptr) {
            throw TargetNotFound("transition " + m.transition_id);
        }
        t->to = t->from;
        t->effects.clear();
        break;
    }
    case Mutation::Kind::kDropEffect: {
        Transition *t = find_transition(out, m.transition_id);
        if (t == nullptr) {
            throw TargetNotFound("transition " + m.transition_id);
        }
        if (t->effects.empty()) {
            throw TargetNotFound("transition " + m.transition_id + " has no effects");
        }
        t->effects.clear();
        break;
    }
    }
    out.variant = "faulty:" + m.id;
    validate_app(out);
    return out;
}

// --- DeviceSession ----------------------------------------------------------------

DeviceSession::DeviceSession(std::shared_ptr<const AppSpec> app)
    : app_(std::move(app)), state_id_(app_->initial) {
    rebuild_view();
}

void DeviceSession::rebuild_view() {
    UIElement root = app_->states.at(state_id_).root();
    for (const AttributeEdit &edit : arrival_.edits) {
        UIState working(root, state_id_);
        for (const ElementPath &path : resolve_selector(working, edit.selector)) {
            UIElement *elem = mutable_at(root, path);
            if (elem == nullptr) {
                continue;
            }
            if (edit.op == AttributeEdit::Op::kSet) {
                std::string value = edit.value;
                size_t pos = value.find("$input");
                if (pos != std::string::npos) {
                    value.replace(pos, 6, arrival_.payload);
                }
                elem->attrs[edit.key] = value;
            } else {
                elem->attrs.erase(edit.key);
            }
        }
    }
    ElementPath path;
    apply_windows(root, path, scroll_);
    view_ = UIState(std::move(root), state_id_);
}

const Transition *DeviceSession::match_transition(const ElementPath &acted,
                                                  const Action &action) const {
    const Transition *fired = nullptr;
    for (const Transition &t : app_->transitions) {
        if (t.from != state_id_ || !action_matches(t.action, action)) {
            continue;
        }
        if (action.kind != ActionKind::kBack) {
            auto claimed = resolve_selector(view_, t.selector);
            if (std::find(claimed.begin(), claimed.end(), acted) == claimed.end()) {
                continue;
            }
        }
        if (fired != nullptr) {
            throw DeviceError("non-deterministic transition match in state " + state_id_);
        }
        fired = &t;
    }
    return fired;
}

UIState DeviceSession::perform(const Operation &op) {
    ElementPath acted;
    if (op.action.kind != ActionKind::kBack) {
        auto matches = resolve_selector(view_, op.selector);
        if (matches.empty()) {
            throw SelectorUnresolved(selector_to_json(op.selector).dump() + " in state " +
                                     state_id_);
        }
        acted = matches.front();
    }

    const Transition *fired = match_transition(acted, op.action);
    if (fired != nullptr) {
        state_id_ = fired->to;
        arrival_.edits = fired->effects;
        arrival_.payload = op.action.kind == ActionKind::kInputText ? op.action.payload : "";
        scroll_.clear();
        rebuild_view();
    } else if (op.action.kind == ActionKind::kScroll) {
        // Native list scrolling: shift the window of the acted container.
        const UIElement *elem = element_at(view_, acted);
        auto window = elem != nullptr ? parse_window(*elem) : std::nullopt;
        if (elem != nullptr && elem->scrollable() && window) {
            int delta = (op.action.direction == Direction::kDown ||
                         op.action.direction == Direction::kRight)
                            ? 1
                            : -1;
            const std::string *ic = elem->attr("item-count");
            int total = ic != nullptr ? std::stoi(*ic) : static_cast<int>(elem->children.size());
            int max_start = std::max(0, total - window->second);
            scroll_[path_key(acted)] = std::clamp(window->first + delta, 0, max_start);
            rebuild_view();
        }
    }
    trace_.push_back(op);
    return view_;
}

UIState DeviceSession::reset() {
    state_id_ = app_->initial;
    arrival_ = {};
    scroll_.clear();
    trace_.clear();
    rebuild_view();
    return view_;
}

} // namespace reqnav
