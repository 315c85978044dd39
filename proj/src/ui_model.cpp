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

#include "reqnav/ui_model.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"

namespace reqnav {

using nlohmann::json;

// --- UIElement ---------------------------------------------------------------

const std::string *UIElement::attr(const std::string &key) const {
    auto it = attrs.find(key);
    return it == attrs.end() ? nullptr : &it->second;
}

bool UIElement::flag(const std::string &key) const {
    const std::string *v = attr(key);
    return v != nullptr && *v == "true";
}

bool UIElement::enabled() const {
    const std::string *v = attr("enabled");
    return v == nullptr || *v != "false";
}

// --- UIState -----------------------------------------------------------------

UIState::UIState() : root_(std::make_shared<const UIElement>()) {}

UIState::UIState(UIElement root, std::optional<std::string> page_id)
    : root_(std::make_shared<const UIElement>(std::move(root))),
      page_id_(std::move(page_id)) {}

UIState::UIState(const UIState &other)
    : root_(other.root_),
      page_id_(other.page_id_),
      digest_cache_(other.digest_cache_.load(std::memory_order_relaxed)) {}

UIState &UIState::operator=(const UIState &other) {
    root_ = other.root_;
    page_id_ = other.page_id_;
    digest_cache_.store(other.digest_cache_.load(std::memory_order_relaxed),
                        std::memory_order_relaxed);
    return *this;
}

std::uint64_t UIState::digest() const {
    std::uint64_t cached = digest_cache_.load(std::memory_order_relaxed);
    if (cached != 0) {
        return cached;
    }
    std::uint64_t d = state_hash(*this);
    if (d == 0) {
        d = 1; // 0 is the not-yet-computed sentinel
    }
    digest_cache_.store(d, std::memory_order_relaxed);
    return d;
}

// --- small utilities ----------------------------------------------------------

std::string trim(const std::string &s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

namespace {

std::regex compile_pattern(const std::string &pattern) {
    std::string body = pattern;
    auto flags = std::regex::ECMAScript;
    if (body.rfind("(?i)", 0) == 0) {
        flags |= std::regex::icase;
        body = body.substr(4);
    }
    try {
        return std::regex(body, flags);
    } catch (const std::regex_error &) {
        throw InvalidRegex(pattern);
    }
}

/// FNV-1a, 64 bit. Deterministic across platforms for byte-stable inputs.
class Fnv1a64 {
public:
    void update(const void *data, size_t n) {
        const auto *p = static_cast<const unsigned char *>(data);
        for (size_t i = 0; i < n; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void update(const std::string &s) {
        std::uint64_t n = s.size();
        update(&n, sizeof(n));
        update(s.data(), s.size());
    }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

bool is_kept(const std::string &key) {
    const auto &kept = kept_attributes();
    return std::find(kept.begin(), kept.end(), key) != kept.end();
}

std::optional<UIElement> compress_element(const UIElement &elem) {
    UIElement out;
    for (const auto &[k, v] : elem.attrs) {
        if (is_kept(k)) {
            out.attrs.emplace(k, v);
        }
    }
    for (const UIElement &child : elem.children) {
        if (auto kept_child = compress_element(child)) {
            out.children.push_back(std::move(*kept_child));
        }
    }
    if (out.attrs.empty() && out.children.empty()) {
        return std::nullopt;
    }
    return out;
}

void hash_element(const UIElement &elem, Fnv1a64 &h) {
    std::uint64_t attr_count = elem.attrs.size();
    h.update(&attr_count, sizeof(attr_count));
    for (const auto &[k, v] : elem.attrs) { // AttrMap iterates key-sorted
        h.update(k);
        h.update(v);
    }
    std::uint64_t child_count = elem.children.size();
    h.update(&child_count, sizeof(child_count));
    for (const UIElement &child : elem.children) {
        hash_element(child, h);
    }
}

void collect_matches(const UIElement &elem, ElementPath &path, const Selector &sel,
                     const std::optional<std::regex> &text_re,
                     std::vector<ElementPath> &out) {
    bool match = true;
    if (sel.resource_id) {
        const std::string *v = elem.attr("resource-id");
        match = match && v != nullptr && trim(*v) == trim(*sel.resource_id);
    }
    if (match && sel.text) {
        const std::string *v = elem.attr("text");
        match = v != nullptr && trim(*v) == trim(*sel.text);
    }
    if (match && text_re) {
        const std::string *v = elem.attr("text");
        match = v != nullptr && std::regex_match(trim(*v), *text_re);
    }
    if (match && sel.content_desc) {
        const std::string *v = elem.attr("content-desc");
        match = v != nullptr && trim(*v) == trim(*sel.content_desc);
    }
    if (match && sel.class_name) {
        const std::string *v = elem.attr("class");
        match = v != nullptr && trim(*v) == trim(*sel.class_name);
    }
    if (match) {
        out.push_back(path);
    }
    for (size_t i = 0; i < elem.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        collect_matches(elem.children[i], path, sel, text_re, out);
        path.pop_back();
    }
}

void render_element(const UIElement &elem, int depth, std::ostringstream &out) {
    out << std::string(static_cast<size_t>(depth) * 2, ' ') << "node";
    for (const auto &[k, v] : elem.attrs) {
        out << ' ' << k << "=\"" << v << '"';
    }
    out << '\n';
    for (const UIElement &child : elem.children) {
        render_element(child, depth + 1, out);
    }
}

} // namespace

bool regex_full_match(const std::string &pattern, const std::string &value) {
    return std::regex_match(value, compile_pattern(pattern));
}

// --- compression / hashing -----------------------------------------------------

const std::vector<std::string> &kept_attributes() {
    static const std::vector<std::string> kKept = {
        "class", "clickable", "content-desc", "enabled",
        "resource-id", "scrollable", "text",
    };
    return kKept;
}

UIState compress_tree(const UIState &state) {
    auto compressed = compress_element(state.root());
    return UIState(compressed ? std::move(*compressed) : UIElement{}, state.page_id());
}

std::uint64_t state_hash(const UIState &state) {
    UIState compressed = compress_tree(state);
    Fnv1a64 h;
    hash_element(compressed.root(), h);
    return h.value();
}

// --- selector resolution ---------------------------------------------------------

std::vector<ElementPath> resolve_selector(const UIState &state, const Selector &sel) {
    std::optional<std::regex> text_re;
    if (sel.text_regex) {
        text_re = compile_pattern(*sel.text_regex);
    }
    std::vector<ElementPath> matches;
    ElementPath path;
    collect_matches(state.root(), path, sel, text_re, matches);
    if (sel.index) {
        size_t idx = static_cast<size_t>(*sel.index);
        if (*sel.index < 0 || idx >= matches.size()) {
            return {};
        }
        return {matches[idx]};
    }
    return matches;
}

const UIElement *element_at(const UIElement &root, const ElementPath &path) {
    const UIElement *cur = &root;
    for (int idx : path) {
        if (idx < 0 || static_cast<size_t>(idx) >= cur->children.size()) {
            return nullptr;
        }
        cur = &cur->children[static_cast<size_t>(idx)];
    }
    return cur;
}

const UIElement *element_at(const UIState &state, const ElementPath &path) {
    return element_at(state.root(), path);
}

std::string serialize_for_prompt(const UIState &state) {
    UIState compressed = compress_tree(state);
    std::ostringstream out;
    render_element(compressed.root(), 0, out);
    return out.str();
}

std::uint64_t operation_hash(const Operation &op) {
    Fnv1a64 h;
    h.update(operation_to_json(op).dump());
    return h.value();
}

Selector build_selector(const UIState &state, const ElementPath &path) {
    const UIElement *elem = element_at(state, path);
    if (elem == nullptr) {
        throw SelectorUnresolved("no element at the given path");
    }
    std::vector<Selector> candidates;
    if (const std::string *v = elem->attr("resource-id"); v && !v->empty()) {
        candidates.push_back(Selector::by_resource_id(*v));
    }
    if (const std::string *v = elem->attr("text"); v && !v->empty()) {
        candidates.push_back(Selector::by_text(*v));
    }
    if (const std::string *v = elem->attr("content-desc"); v && !v->empty()) {
        candidates.push_back(Selector::by_content_desc(*v));
    }
    if (const std::string *v = elem->attr("class"); v && !v->empty()) {
        candidates.push_back(Selector::by_class(*v));
    }
    if (candidates.empty()) {
        throw SelectorUnresolved("element has no identifying attribute");
    }
    // First predicate that is unique wins; otherwise fall back to the first
    // predicate plus the element's ordinal among its matches.
    for (const Selector &cand : candidates) {
        auto matches = resolve_selector(state, cand);
        if (matches.size() == 1 && matches[0] == path) {
            return cand;
        }
    }
    Selector cand = candidates.front();
    auto matches = resolve_selector(state, cand);
    for (size_t i = 0; i < matches.size(); ++i) {
        if (matches[i] == path) {
            cand.index = static_cast<int>(i);
            return cand;
        }
    }
    throw SelectorUnresolved("element not reachable by its own attributes");
}

// --- JSON forms -------------------------------------------------------------------

json ui_tree_to_json(const UIElement &elem) {
    json j;
    j["attrs"] = json::object();
    for (const auto &[k, v] : elem.attrs) {
        j["attrs"][k] = v;
    }
    j["children"] = json::array();
    for (const UIElement &child : elem.children) {
        j["children"].push_back(ui_tree_to_json(child));
    }
    return j;
}

UIElement ui_tree_from_json(const json &j) {
    if (!j.is_object()) {
        throw ParseError("ui tree node must be an object");
    }
    UIElement elem;
    if (j.contains("attrs")) {
        if (!j["attrs"].is_object()) {
            throw ParseError("ui tree 'attrs' must be an object");
        }
        for (auto it = j["attrs"].begin(); it != j["attrs"].end(); ++it) {
            if (!it.value().is_string()) {
                throw ParseError("ui tree attribute '" + it.key() + "' must be a string");
            }
            elem.attrs.emplace(it.key(), it.value().get<std::string>());
        }
    }
    if (j.contains("children")) {
        if (!j["children"].is_array()) {
            throw ParseError("ui tree 'children' must be an array");
        }
        for (const json &child : j["children"]) {
            elem.children.push_back(ui_tree_from_json(child));
        }
    }
    return elem;
}

json selector_to_json(const Selector &sel) {
    json j = json::object();
    if (sel.resource_id) j["resource-id"] = *sel.resource_id;
    if (sel.text) j["text"] = *sel.text;
    if (sel.text_regex) j["text-matches"] = *sel.text_regex;
    if (sel.content_desc) j["content-desc"] = *sel.content_desc;
    if (sel.class_name) j["class"] = *sel.class_name;
    if (sel.index) j["index"] = *sel.index;
    return j;
}

Selector selector_from_json(const json &j) {
    if (!j.is_object()) {
        throw ParseError("selector must be an object");
    }
    Selector sel;
    if (j.contains("resource-id")) sel.resource_id = j["resource-id"].get<std::string>();
    if (j.contains("text")) sel.text = j["text"].get<std::string>();
    if (j.contains("text-matches")) sel.text_regex = j["text-matches"].get<std::string>();
    if (j.contains("content-desc")) sel.content_desc = j["content-desc"].get<std::string>();
    if (j.contains("class")) sel.class_name = j["class"].get<std::string>();
    if (j.contains("index")) {
        int idx = j["index"].get<int>();
        if (idx < 0) {
            throw ParseError("selector index must be non-negative");
        }
        sel.index = idx;
    }
    if (!sel.has_predicate()) {
        throw ParseError("selector must carry at least one predicate");
    }
    if (sel.text_regex) {
        regex_full_match(*sel.text_regex, ""); // compile check; throws InvalidRegex
    }
    return sel;
}

namespace {

const std::map<std::string, ActionKind> &action_kind_names() {
    static const std::map<std::string, ActionKind> kNames = {
        {"click", ActionKind::kClick},       {"long-click", ActionKind::kLongClick},
        {"swipe", ActionKind::kSwipe},       {"scroll", ActionKind::kScroll},
        {"input-text", ActionKind::kInputText}, {"back", ActionKind::kBack},
    };
    return kNames;
}

const std::map<std::string, Direction> &direction_names() {
    static const std::map<std::string, Direction> kNames = {
        {"up", Direction::kUp}, {"down", Direction::kDown},
        {"left", Direction::kLeft}, {"right", Direction::kRight},
    };
    return kNames;
}

std::string action_kind_name(ActionKind kind) {
    for (const auto &[name, k] : action_kind_names()) {
        if (k == kind) return name;
    }
    return "click";
}

std::string direction_name(Direction d) {
    for (const auto &[name, v] : direction_names()) {
        if (v == d) return name;
    }
    return "down";
}

} // namespace

json action_to_json(const Action &a) {
    json j;
    j["kind"] = action_kind_name(a.kind);
    if (a.kind == ActionKind::kSwipe || a.kind == ActionKind::kScroll) {
        j["direction"] = direction_name(a.direction);
    }
    if (a.kind == ActionKind::kInputText) {
        j["payload"] = a.payload;
    }
    return j;
}

Action action_from_json(const json &j) {
    if (!j.is_object() || !j.contains("kind")) {
        throw ParseError("action must be an object with a 'kind'");
    }
    const std::string kind = j["kind"].get<std::string>();
    auto it = action_kind_names().find(kind);
    if (it == action_kind_names().end()) {
        throw ParseError("unknown action kind: " + kind);
    }
    Action a;
    a.kind = it->second;
    if (a.kind == ActionKind::kSwipe || a.kind == ActionKind::kScroll) {
        std::string dir = j.value("direction", "down");
        auto dit = direction_names().find(dir);
        if (dit == direction_names().end()) {
            throw ParseError("unknown direction: " + dir);
        }
        a.direction = dit->second;
    }
    if (a.kind == ActionKind::kInputText) {
        if (!j.contains("payload")) {
            throw ParseError("input-text action requires a payload");
        }
        a.payload = j["payload"].get<std::string>();
    }
    return a;
}

json operation_to_json(const Operation &op) {
    json j;
    j["selector"] = selector_to_json(op.selector);
    j["action"] = action_to_json(op.action);
    return j;
}

Operation operation_from_json(const json &j) {
    if (!j.is_object() || !j.contains("selector") || !j.contains("action")) {
        throw ParseError("operation must carry 'selector' and 'action'");
    }
    return Operation{selector_from_json(j["selector"]), action_from_json(j["action"])};
}

} // namespace reqnav
