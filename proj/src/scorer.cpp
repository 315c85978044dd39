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

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"

namespace reqnav {

double path_score(const std::vector<double> &gammas) {
    if (gammas.empty()) {
        throw EmptyPath();
    }
    double log_sum = 0.0;
    for (double g : gammas) {
        if (g < 0.2 - 1e-9 || g > 1.0 + 1e-9) {
            throw std::invalid_argument("gamma out of [0.2, 1.0]: " + std::to_string(g));
        }
        log_sum += std::log(g);
    }
    return std::exp(log_sum / static_cast<double>(gammas.size()));
}

std::optional<nlohmann::json>
Scorer::plan_script_json(const std::string &, const UIState &,
                         const std::vector<Operation> &) const {
    return std::nullopt;
}

std::optional<nlohmann::json>
Scorer::plan_oracle_json(const std::string &, const UIState &, const UIState &,
                         const std::vector<Operation> &, int) const {
    return std::nullopt;
}

namespace {

/// Core tokens of an element: text plus content-desc, minus stop and generic
/// words. The literal-equivalence rule works on these so that pure aggregation
/// labels ("Settings", "Menu") can never claim level 5.
std::vector<std::string> element_core_tokens(const Lexicon &lex, const UIElement &elem) {
    std::vector<std::string> out;
    auto add_from = [&](const char *key) {
        if (const std::string *v = elem.attr(key)) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                if (!lex.is_stop_word(tok) && !lex.is_generic_word(tok) &&
                    std::find(out.begin(), out.end(), tok) == out.end()) {
                    out.push_back(tok);
                }
            }
        }
    };
    add_from("text");
    add_from("content-desc");
    return out;
}

/// Like element_core_tokens but keeping generic words; the synonym rule must
/// still see labels such as "Settings".
std::vector<std::string> element_nostop_tokens(const Lexicon &lex, const UIElement &elem) {
    std::vector<std::string> out;
    auto add_from = [&](const char *key) {
        if (const std::string *v = elem.attr(key)) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                if (!lex.is_stop_word(tok) &&
                    std::find(out.begin(), out.end(), tok) == out.end()) {
                    out.push_back(tok);
                }
            }
        }
    };
    add_from("text");
    add_from("content-desc");
    return out;
}

std::vector<std::string> element_raw_tokens(const UIElement &elem) {
    std::vector<std::string> out;
    auto add_from = [&](const char *key) {
        if (const std::string *v = elem.attr(key)) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                if (std::find(out.begin(), out.end(), tok) == out.end()) {
                    out.push_back(tok);
                }
            }
        }
    };
    add_from("text");
    add_from("content-desc");
    return out;
}

bool fuzzy_subset(const std::vector<std::string> &sub, const std::vector<std::string> &super) {
    if (sub.empty()) {
        return false;
    }
    return std::all_of(sub.begin(), sub.end(), [&](const std::string &a) {
        return std::any_of(super.begin(), super.end(), [&](const std::string &b) {
            return Lexicon::token_match(a, b);
        });
    });
}

/// Literal equivalence: the element's core tokens coincide with or are fully
/// contained in the keyphrase (or vice versa).
bool literal_equivalence(const std::vector<std::string> &etoks,
                         const std::vector<std::string> &ktoks) {
    return fuzzy_subset(etoks, ktoks) || fuzzy_subset(ktoks, etoks);
}

bool synonym_hit(const Lexicon &lex, const std::vector<std::string> &etoks,
                 const std::vector<std::string> &ktoks) {
    for (const std::string &e : etoks) {
        for (const std::string &k : ktoks) {
            if (lex.synonymous(e, k)) {
                return true;
            }
        }
    }
    return false;
}

bool subtree_has_level45(const Lexicon &lex, const UIElement &elem,
                         const std::vector<std::string> &ktoks) {
    for (const UIElement &child : elem.children) {
        if (literal_equivalence(element_core_tokens(lex, child), ktoks) ||
            synonym_hit(lex, element_nostop_tokens(lex, child), ktoks)) {
            return true;
        }
        if (subtree_has_level45(lex, child, ktoks)) {
            return true;
        }
    }
    return false;
}

bool editable(const UIElement &elem) {
    const std::string *cls = elem.attr("class");
    return cls != nullptr && cls->find("EditText") != std::string::npos;
}

RelevanceLevel score_element(const Lexicon &lex, const std::string &requirement,
                             const UIElement &elem) {
    const std::vector<std::string> ktoks = lex.keyphrase(requirement);
    if (literal_equivalence(element_core_tokens(lex, elem), ktoks)) {
        return {5};
    }
    if (synonym_hit(lex, element_nostop_tokens(lex, elem), ktoks)) {
        return {4};
    }
    if (!elem.children.empty() && subtree_has_level45(lex, elem, ktoks)) {
        return {3};
    }
    for (const std::string &tok : element_raw_tokens(elem)) {
        if (lex.is_generic_word(tok)) {
            return {2};
        }
    }
    return {1};
}

std::string level_rationale(int level) {
    switch (level) {
    case 5: return "literal equivalence with the requirement";
    case 4: return "synonym of a requirement term";
    case 3: return "container of a strongly related element";
    case 2: return "generic aggregation entry";
    default: return "no relation to the requirement";
    }
}

} // namespace

RelevanceLevel LexicalScorer::atomic_score(const std::string &requirement,
                                           const UIState &state,
                                           const Operation &op) const {
    auto matches = resolve_selector(state, op.selector);
    if (matches.empty()) {
        throw SelectorUnresolved("atomic_score: selector matches nothing");
    }
    return score_element(lexicon_, requirement, *element_at(state, matches.front()));
}

ExploreResult LexicalScorer::page_explore(const std::string &requirement,
                                          const UIState &state, int k) const {
    std::vector<CandidateOp> scored;

    std::string payload = lexicon_.quoted_literal(requirement);
    if (payload.empty()) {
        payload = "reqnav-probe";
    }

    // Walk interactable elements in document order.
    std::vector<std::pair<ElementPath, const UIElement *>> elements;
    std::function<void(const UIElement &, ElementPath &)> walk =
        [&](const UIElement &elem, ElementPath &path) {
            elements.emplace_back(path, &elem);
            for (size_t i = 0; i < elem.children.size(); ++i) {
                path.push_back(static_cast<int>(i));
                walk(elem.children[i], path);
                path.pop_back();
            }
        };
    ElementPath root_path;
    walk(state.root(), root_path);

    for (const auto &[path, elem] : elements) {
        if (!elem->enabled()) {
            continue;
        }
        bool is_editable = editable(*elem);
        if (!elem->clickable() && !is_editable) {
            continue;
        }
        Operation op;
        op.selector = build_selector(state, path);
        op.action = is_editable ? Action::input_text(payload) : Action::click();
        RelevanceLevel level = score_element(lexicon_, requirement, *elem);
        scored.push_back({std::move(op), level, level_rationale(level.level)});
    }

    std::stable_sort(scored.begin(), scored.end(),
                     [](const CandidateOp &a, const CandidateOp &b) {
                         return a.atomic.level > b.atomic.level;
                     });

    ExploreResult result;
    result.is_entry = !scored.empty() && scored.front().atomic.level == 5;
    size_t limit = std::min(scored.size(), static_cast<size_t>(std::max(1, k)));
    if (result.is_entry) {
        for (const CandidateOp &c : scored) {
            if (c.atomic.level == 5 && result.candidates.size() < limit) {
                result.candidates.push_back(c);
            }
        }
    } else {
        result.candidates.assign(scored.begin(),
                                 scored.begin() + static_cast<long>(limit));
    }
    return result;
}

} // namespace reqnav
