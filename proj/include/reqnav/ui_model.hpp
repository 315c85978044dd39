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

#ifndef REQNAV_UI_MODEL_HPP_
#define REQNAV_UI_MODEL_HPP_

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace reqnav {

/// Attribute maps are ordered by key so canonical serialization falls out of
/// plain iteration.
using AttrMap = std::map<std::string, std::string>;

/// Root-to-node child-index path. The empty path addresses the root.
using ElementPath = std::vector<int>;

/// One node of a UI hierarchy: a bag of string attributes plus ordered
/// children. Child order is significant and feeds the state hash.
struct UIElement {
    AttrMap attrs;
    std::vector<UIElement> children;

    /// Attribute lookup; nullptr when absent.
    const std::string *attr(const std::string &key) const;
    bool flag(const std::string &key) const; // attr == "true"
    bool clickable() const { return flag("clickable"); }
    bool scrollable() const { return flag("scrollable"); }
    bool enabled() const; // defaults to true when the attribute is absent

    bool operator==(const UIElement &other) const = default;
};

/// An immutable snapshot of a UI hierarchy. The digest is a pure function of
/// the compressed tree, computed on first use and cached; states with equal
/// compressed trees always have equal digests.
class UIState {
public:
    UIState();
    explicit UIState(UIElement root, std::optional<std::string> page_id = std::nullopt);

    UIState(const UIState &other);
    UIState &operator=(const UIState &other);
    UIState(UIState &&) noexcept = default;
    UIState &operator=(UIState &&) noexcept = default;

    const UIElement &root() const { return *root_; }
    const std::optional<std::string> &page_id() const { return page_id_; }
    std::uint64_t digest() const;

private:
    std::shared_ptr<const UIElement> root_;
    std::optional<std::string> page_id_;
    mutable std::atomic<std::uint64_t> digest_cache_{0}; // 0 = not yet computed
};

// --- actions and selectors ----------------------------------------------------

enum class ActionKind { kClick, kLongClick, kSwipe, kScroll, kInputText, kBack };
enum class Direction { kUp, kDown, kLeft, kRight };

struct Action {
    ActionKind kind = ActionKind::kClick;
    Direction direction = Direction::kDown;  // swipe/scroll only
    std::string payload;                     // input-text only

    static Action click() { return {ActionKind::kClick, Direction::kDown, ""}; }
    static Action long_click() { return {ActionKind::kLongClick, Direction::kDown, ""}; }
    static Action scroll(Direction d) { return {ActionKind::kScroll, d, ""}; }
    static Action swipe(Direction d) { return {ActionKind::kSwipe, d, ""}; }
    static Action input_text(std::string payload) {
        return {ActionKind::kInputText, Direction::kDown, std::move(payload)};
    }
    static Action back() { return {ActionKind::kBack, Direction::kDown, ""}; }

    bool operator==(const Action &other) const = default;
};

/// Conjunction of attribute predicates plus an optional ordinal for
/// disambiguation. At least one predicate must be present.
struct Selector {
    std::optional<std::string> resource_id;  // equals
    std::optional<std::string> text;         // equals, whitespace-trimmed
    std::optional<std::string> text_regex;   // full match, leading (?i) honored
    std::optional<std::string> content_desc; // equals
    std::optional<std::string> class_name;   // equals
    std::optional<int> index;

    bool has_predicate() const {
        return resource_id || text || text_regex || content_desc || class_name;
    }

    static Selector by_resource_id(std::string v) { Selector s; s.resource_id = std::move(v); return s; }
    static Selector by_text(std::string v) { Selector s; s.text = std::move(v); return s; }
    static Selector by_text_regex(std::string v) { Selector s; s.text_regex = std::move(v); return s; }
    static Selector by_content_desc(std::string v) { Selector s; s.content_desc = std::move(v); return s; }
    static Selector by_class(std::string v) { Selector s; s.class_name = std::move(v); return s; }

    bool operator==(const Selector &other) const = default;
};

/// The 2-tuple of element selector and interaction action; the edge unit of
/// exploration.
struct Operation {
    Selector selector;
    Action action;

    bool operator==(const Operation &other) const = default;
};

// --- operations on states -----------------------------------------------------

/// Attribute keys kept by compression. Everything else (bounds, package,
/// window bookkeeping, ...) is pruned before hashing and prompt rendering.
const std::vector<std::string> &kept_attributes();

/// Returns a copy keeping only the semantically meaningful attributes.
/// Elements with no kept attribute and no kept descendants are pruned;
/// child order is preserved.
UIState compress_tree(const UIState &state);

/// Deterministic 64-bit digest of the compressed tree serialized in canonical
/// order (attributes by key, children in order). Equal compressed trees yield
/// equal digests.
std::uint64_t state_hash(const UIState &state);

/// All elements satisfying every predicate of `sel`, as root-to-node index
/// paths in document order. An index predicate picks that ordinal from the
/// match list. Matching nothing is not an error. Throws InvalidRegex.
std::vector<ElementPath> resolve_selector(const UIState &state, const Selector &sel);

/// Element at `path`, or nullptr when the path walks off the tree.
const UIElement *element_at(const UIState &state, const ElementPath &path);
const UIElement *element_at(const UIElement &root, const ElementPath &path);

/// Stable, human-readable indented rendering of the compressed tree; one node
/// per line with its kept attributes. Byte-identical across calls.
std::string serialize_for_prompt(const UIState &state);

/// Content hash of an operation (canonical JSON of selector + action).
std::uint64_t operation_hash(const Operation &op);

/// Builds a selector identifying `elem` within `state`, preferring
/// resource-id over text over content-desc over class, appending an index
/// when the chosen predicates are ambiguous. The result always resolves
/// uniquely to the element at `path`.
Selector build_selector(const UIState &state, const ElementPath &path);

// --- JSON wire/on-disk forms ----------------------------------------------------

// UI tree node form: {"attrs": {k: v}, "children": [node...]}
nlohmann::json ui_tree_to_json(const UIElement &elem);
UIElement ui_tree_from_json(const nlohmann::json &j);

nlohmann::json selector_to_json(const Selector &sel);
Selector selector_from_json(const nlohmann::json &j);

nlohmann::json action_to_json(const Action &a);
Action action_from_json(const nlohmann::json &j);

nlohmann::json operation_to_json(const Operation &op);
Operation operation_from_json(const nlohmann::json &j);

// --- small shared utilities ----------------------------------------------------

std::string trim(const std::string &s);

/// Compiles `pattern` with full-match semantics. A leading "(?i)" switches on
/// case-insensitive matching (std::regex has no inline flags). Throws
/// InvalidRegex on a pattern that does not compile.
bool regex_full_match(const std::string &pattern, const std::string &value);

} // namespace reqnav

#endif // REQNAV_UI_MODEL_HPP_
