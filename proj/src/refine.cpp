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

#include "reqnav/refine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "reqnav/errors.hpp"

namespace reqnav {

namespace {

// Attribute priority for rebuilt selectors.
const char *const kSearchAttrs[] = {"resource-id", "text", "content-desc"};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

bool contains_ci(const std::string &haystack, const std::string &needle) {
    if (needle.empty()) {
        return false;
    }
    return lower(haystack).find(lower(needle)) != std::string::npos;
}

struct FlatElement {
    ElementPath path;
    const UIElement *elem;
};

std::vector<FlatElement> flatten(const UIState &state) {
    std::vector<FlatElement> out;
    std::function<void(const UIElement &, ElementPath &)> walk =
        [&](const UIElement &elem, ElementPath &path) {
            out.push_back({path, &elem});
            for (size_t i = 0; i < elem.children.size(); ++i) {
                path.push_back(static_cast<int>(i));
                walk(elem.children[i], path);
                path.pop_back();
            }
        };
    ElementPath path;
    walk(state.root(), path);
    return out;
}

/// Failed (attribute, value) pairs in rebuild priority order.
std::vector<std::pair<std::string, std::string>> failed_values(const Selector &failed) {
    std::vector<std::pair<std::string, std::string>> out;
    if (failed.resource_id) out.emplace_back("resource-id", *failed.resource_id);
    if (failed.text) out.emplace_back("text", *failed.text);
    if (failed.content_desc) out.emplace_back("content-desc", *failed.content_desc);
    return out;
}

Selector selector_for(const std::string &attr, const std::string &value) {
    if (attr == "resource-id") return Selector::by_resource_id(value);
    if (attr == "text") return Selector::by_text(value);
    return Selector::by_content_desc(value);
}

/// Makes `sel` resolve uniquely by appending the ordinal of the first match.
Selector uniquify(Selector sel, const UIState &state) {
    auto matches = resolve_selector(state, sel);
    if (matches.size() > 1) {
        sel.index = 0;
    }
    return sel;
}

} // namespace

RefineOutcome refine_ex(const Selector &failed, const UIState &state) {
    if (!failed.has_predicate()) {
        throw Unrepairable("selector has no predicate");
    }

    // Healthy input: resolves uniquely already.
    auto initial = resolve_selector(state, failed);
    if (initial.size() == 1) {
        return {failed, RefineTier::kNone, {}};
    }
    if (initial.size() > 1) {
        Selector repaired = failed;
        repaired.index = 0;
        return {repaired, RefineTier::kIndexOnly, {}};
    }

    RefineOutcome outcome;
    const auto values = failed_values(failed);
    const auto elements = flatten(state);

    // Tier 1: the exact value still exists under the same attribute somewhere.
    outcome.tiers_tried.push_back(RefineTier::kExact);
    for (const auto &[attr, value] : values) {
        Selector cand = selector_for(attr, value);
        if (!resolve_selector(state, cand).empty()) {
            outcome.selector = uniquify(cand, state);
            outcome.tier = RefineTier::kExact;
            return outcome;
        }
    }

    // Tier 2: the exact value exists under a different attribute.
    outcome.tiers_tried.push_back(RefineTier::kCross);
    for (const auto &[attr, value] : values) {
        for (const char *other : kSearchAttrs) {
            if (attr == other) {
                continue;
            }
            Selector cand = selector_for(other, value);
            if (!resolve_selector(state, cand).empty()) {
                outcome.selector = uniquify(cand, state);
                outcome.tier = RefineTier::kCross;
                return outcome;
            }
        }
    }

    // Tier 3: case-insensitive containment between failed values and element
    // attribute values; the longest contained string wins, ties resolved by
    // attribute priority then document order.
    outcome.tiers_tried.push_back(RefineTier::kFuzzy);
    {
        size_t best_len = 0;
        int best_attr_rank = 0;
        Selector best;
        bool found = false;
        for (const FlatElement &fe : elements) {
            for (int rank = 0; rank < 3; ++rank) {
                const std::string *attr_value = fe.elem->attr(kSearchAttrs[rank]);
                if (attr_value == nullptr || attr_value->empty()) {
                    continue;
                }
                for (const auto &[attr, value] : values) {
                    size_t len = 0;
                    if (contains_ci(*attr_value, value)) {
                        len = value.size();
                    } else if (contains_ci(value, *attr_value)) {
                        len = attr_value->size();
                    } else {
                        continue;
                    }
                    if (len > best_len || (len == best_len && found && rank < best_attr_rank)) {
                        best_len = len;
                        best_attr_rank = rank;
                        best = selector_for(kSearchAttrs[rank], *attr_value);
                        found = true;
                    }
                }
            }
        }
        if (found) {
            outcome.selector = uniquify(best, state);
            outcome.tier = RefineTier::kFuzzy;
            return outcome;
        }
    }

    // Tier 4: class name match; only usable when the class is unique.
    outcome.tiers_tried.push_back(RefineTier::kClass);
    if (failed.class_name) {
        Selector cand = Selector::by_class(*failed.class_name);
        if (resolve_selector(state, cand).size() == 1) {
            outcome.selector = cand;
            outcome.tier = RefineTier::kClass;
            return outcome;
        }
    }

    throw Unrepairable("no tier produced a resolvable selector");
}

Selector refine(const Selector &failed, const UIState &state) {
    return refine_ex(failed, state).selector;
}

} // namespace reqnav
