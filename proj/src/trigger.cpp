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

#include "reqnav/trigger.hpp"

#include <algorithm>
#include <functional>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "reqnav/refine.hpp"

namespace reqnav {

using nlohmann::json;

bool evaluate_assertion(const UIState &state, const Assertion &a) {
    std::vector<ElementPath> matches;
    try {
        matches = resolve_selector(state, a.selector);
    } catch (const InvalidRegex &) {
        return false;
    }
    switch (a.mode) {
    case Assertion::Mode::kExists:
        return !matches.empty();
    case Assertion::Mode::kAbsent:
        return matches.empty();
    case Assertion::Mode::kTextMatches:
        for (const ElementPath &path : matches) {
            const UIElement *elem = element_at(state, path);
            const std::string *text = elem->attr("text");
            if (text != nullptr && regex_full_match(a.pattern, trim(*text))) {
                return true;
            }
            const std::string *cd = elem->attr("content-desc");
            if (cd != nullptr && regex_full_match(a.pattern, trim(*cd))) {
                return true;
            }
        }
        return false;
    case Assertion::Mode::kAttrEquals:
        for (const ElementPath &path : matches) {
            const std::string *v = element_at(state, path)->attr(a.attr_key);
            if (v != nullptr && *v == a.attr_value) {
                return true;
            }
        }
        return false;
    }
    return false;
}

// --- planner helpers ---------------------------------------------------------

namespace {

std::vector<std::string> selector_value_tokens(const Selector &sel) {
    std::vector<std::string> out;
    auto add = [&out](const std::optional<std::string> &v) {
        if (v) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                out.push_back(tok);
            }
        }
    };
    add(sel.text);
    add(sel.content_desc);
    return out;
}

std::vector<std::string> element_tokens_for(const UIState &state, const Operation &op) {
    auto matches = resolve_selector(state, op.selector);
    if (matches.empty()) {
        return selector_value_tokens(op.selector);
    }
    const UIElement *elem = element_at(state, matches.front());
    std::vector<std::string> out;
    for (const char *key : {"text", "content-desc"}) {
        if (const std::string *v = elem->attr(key)) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                out.push_back(tok);
            }
        }
    }
    return out;
}

bool any_token_matches(const std::vector<std::string> &tokens,
                       const std::vector<std::string> &targets) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string &t) {
        return std::any_of(targets.begin(), targets.end(), [&](const std::string &u) {
            return Lexicon::token_match(t, u);
        });
    });
}

/// Evidence tokens expanded with their synonym-table entries.
std::vector<std::string> expanded_evidence(const Lexicon &lex,
                                           const std::vector<std::string> &evidence) {
    std::vector<std::string> out = evidence;
    for (const std::string &tok : evidence) {
        for (const auto &[word, syns] : lex.synonyms()) {
            if (Lexicon::token_match(word, tok)) {
                for (const std::string &syn : syns) {
                    if (std::find(out.begin(), out.end(), syn) == out.end()) {
                        out.push_back(syn);
                    }
                }
            }
        }
    }
    return out;
}

std::vector<std::string> collect_subtree_text_tokens(const UIElement &elem) {
    std::vector<std::string> out;
    std::function<void(const UIElement &)> walk = [&](const UIElement &e) {
        if (const std::string *v = e.attr("text")) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                out.push_back(tok);
            }
        }
        for (const UIElement &child : e.children) {
            walk(child);
        }
    };
    walk(elem);
    return out;
}

} // namespace

std::string removal_target_regex(const std::string &requirement, const UIState &state,
                                 const std::vector<Operation> &trigger_ops,
                                 const Lexicon &lexicon) {
    const std::vector<std::string> ktoks = lexicon.keyphrase(requirement);
    auto residual_of = [&](const std::vector<std::string> &tokens) {
        std::vector<std::string> out;
        for (const std::string &tok : tokens) {
            if (lexicon.is_stop_word(tok)) {
                continue;
            }
            if (any_token_matches({tok}, ktoks)) {
                continue;
            }
            if (std::find(out.begin(), out.end(), tok) == out.end()) {
                out.push_back(tok);
            }
        }
        return out;
    };

    for (const Operation &op : trigger_ops) {
        auto matches = resolve_selector(state, op.selector);
        if (matches.empty()) {
            continue;
        }
        std::vector<std::string> own = element_tokens_for(state, op);
        std::vector<std::string> residual = residual_of(own);
        if (!residual.empty()) {
            return evidence_regex(residual);
        }
        // The affordance itself carries no identity ("Delete note" on every
        // row); look at the visible text of the enclosing rows instead.
        ElementPath path = matches.front();
        while (!path.empty()) {
            path.pop_back();
            const UIElement *ancestor = element_at(state, path);
            std::vector<std::string> subtree = collect_subtree_text_tokens(*ancestor);
            std::vector<std::string> candidate;
            for (const std::string &tok : subtree) {
                if (std::find(own.begin(), own.end(), tok) == own.end()) {
                    candidate.push_back(tok);
                }
            }
            candidate = residual_of(candidate);
            if (!candidate.empty()) {
                return evidence_regex(candidate);
            }
        }
    }
    return "";
}

std::vector<ScriptStep> generate_script(const std::string &requirement,
                                        const UIState &state,
                                        const std::vector<Operation> &trigger_ops,
                                        const Scorer &scorer,
                                        const std::string &removal_target) {
    if (auto remote = scorer.plan_script_json(requirement, state, trigger_ops)) {
        std::vector<ScriptStep> script;
        try {
            script = script_from_json(*remote);
        } catch (const ParseError &e) {
            throw MalformedReply(e.what());
        } catch (const InvalidRegex &e) {
            throw MalformedReply(e.what());
        }
        bool has_assert = std::any_of(script.begin(), script.end(),
                                      [](const ScriptStep &s) { return !s.is_act(); });
        if (script.empty() || !has_assert) {
            throw MalformedReply("script must contain at least one assertion");
        }
        return script;
    }

    const Lexicon &lex = scorer.lexicon();
    const std::vector<std::string> evidence = lex.evidence(requirement);
    if (evidence.empty()) {
        throw UnplannableRequirement(requirement);
    }
    const bool removal = lex.is_removal_requirement(requirement);

    std::vector<ScriptStep> script;
    bool acted_evidence = false;
    for (const Operation &op : trigger_ops) {
        Assertion present;
        present.selector = op.selector;
        present.mode = Assertion::Mode::kExists;
        present.message = "trigger element not present: " + selector_to_json(op.selector).dump();
        script.push_back(ScriptStep::check(std::move(present)));
        script.push_back(ScriptStep::act(op));
        if (any_token_matches(element_tokens_for(state, op), evidence)) {
            acted_evidence = true;
        }
    }

    if (!acted_evidence) {
        // Locate the requirement evidence (scrolling as needed) and act on it.
        Assertion found;
        found.selector = Selector::by_text_regex(evidence_regex(evidence));
        found.mode = Assertion::Mode::kExists;
        found.message = "no element matching the requirement evidence: " +
                        evidence_regex(evidence);
        script.push_back(ScriptStep::check(std::move(found), /*scroll_until=*/true));
        Operation click_evidence;
        click_evidence.selector = Selector::by_text_regex(evidence_regex(evidence));
        click_evidence.action = Action::click();
        script.push_back(ScriptStep::act(std::move(click_evidence)));
    }

    if (removal && !removal_target.empty()) {
        Assertion gone;
        gone.selector = Selector::by_text_regex(removal_target);
        gone.mode = Assertion::Mode::kAbsent;
        gone.message = "removed item still present: " + removal_target;
        script.push_back(ScriptStep::check(std::move(gone)));
    } else if (acted_evidence) {
        Assertion terminal;
        terminal.selector =
            Selector::by_text_regex(evidence_regex(expanded_evidence(lex, evidence)));
        terminal.mode = Assertion::Mode::kExists;
        terminal.message = "requirement evidence missing after trigger";
        script.push_back(ScriptStep::check(std::move(terminal)));
    }
    return script;
}

// --- execution -----------------------------------------------------------------

namespace {

std::optional<ElementPath> first_scrollable(const UIState &state) {
    std::optional<ElementPath> found;
    std::function<void(const UIElement &, ElementPath &)> walk =
        [&](const UIElement &elem, ElementPath &path) {
            if (found) {
                return;
            }
            if (elem.scrollable() && elem.attr("item-count") != nullptr) {
                found = path;
                return;
            }
            for (size_t i = 0; i < elem.children.size(); ++i) {
                path.push_back(static_cast<int>(i));
                walk(elem.children[i], path);
                path.pop_back();
            }
        };
    ElementPath path;
    walk(state.root(), path);
    return found;
}

} // namespace

ExecutionOutcome execute_script(DeviceSession &session,
                                const std::vector<ScriptStep> &script,
                                int max_scroll_iters) {
    ExecutionOutcome outcome;
    outcome.reached = session.current();
    bool failed = false;

    for (const ScriptStep &step : script) {
        if (failed) {
            break;
        }
        if (step.is_act()) {
            Operation op = std::get<ScriptStep::Act>(step.step).op;
            if (resolve_selector(session.current(), op.selector).empty()) {
                try {
                    op.selector = refine(op.selector, session.current());
                } catch (const Unrepairable &) {
                    Assertion pseudo;
                    pseudo.selector = op.selector;
                    pseudo.mode = Assertion::Mode::kExists;
                    pseudo.message = "action selector unresolved after refinement";
                    outcome.assertion_results.push_back({std::move(pseudo), false});
                    failed = true;
                    break;
                }
            }
            outcome.reached = session.perform(op);
            outcome.executed_ops.push_back(std::move(op));
        } else {
            const auto &check = std::get<ScriptStep::Assert>(step.step);
            bool pass = evaluate_assertion(session.current(), check.assertion);
            if (!pass && check.scroll_until) {
                auto container = first_scrollable(session.current());
                if (container) {
                    const UIElement *elem = element_at(session.current(), *container);
                    int bound = std::stoi(*elem->attr("item-count"));
                    if (max_scroll_iters > 0) {
                        bound = std::min(bound, max_scroll_iters);
                    }
                    Selector container_sel = build_selector(session.current(), *container);
                    for (int i = 0; i < bound && !pass; ++i) {
                        Operation scroll{container_sel, Action::scroll(Direction::kDown)};
                        outcome.reached = session.perform(scroll);
                        outcome.executed_ops.push_back(scroll);
                        pass = evaluate_assertion(session.current(), check.assertion);
                    }
                }
            }
            outcome.assertion_results.push_back({check.assertion, pass});
            if (!pass) {
                failed = true;
            }
        }
    }

    bool all_pass = !outcome.assertion_results.empty() &&
                    std::all_of(outcome.assertion_results.begin(),
                                outcome.assertion_results.end(),
                                [](const AssertionResult &r) { return r.pass; });
    outcome.presence = (!failed && all_pass) ? PresenceVerdict::kConfirmed
                                             : PresenceVerdict::kAbsent;
    outcome.reached = session.current();
    return outcome;
}

ExecutionOutcome iterate_until_complete(const std::string &requirement,
                                        DeviceSession &session, const Scorer &scorer,
                                        int max_rounds, int candidates) {
    ExecutionOutcome total;
    total.reached = session.current();
    std::string removal_hint;
    bool hint_derived = false;

    for (int round = 0; round < max_rounds; ++round) {
        ExploreResult explored = scorer.page_explore(requirement, session.current(), candidates);
        if (!explored.is_entry || explored.candidates.empty()) {
            break; // nothing triggerable from here; verdict stays absent
        }
        std::vector<Operation> trigger_ops;
        for (const CandidateOp &cand : explored.candidates) {
            trigger_ops.push_back(cand.op);
        }
        if (!hint_derived && scorer.lexicon().is_removal_requirement(requirement)) {
            removal_hint = removal_target_regex(requirement, session.current(), trigger_ops,
                                                scorer.lexicon());
            hint_derived = true;
        }
        std::vector<ScriptStep> script =
            generate_script(requirement, session.current(), trigger_ops, scorer, removal_hint);
        ExecutionOutcome round_outcome = execute_script(session, script);
        total.executed_ops.insert(total.executed_ops.end(),
                                  round_outcome.executed_ops.begin(),
                                  round_outcome.executed_ops.end());
        total.assertion_results.insert(total.assertion_results.end(),
                                       round_outcome.assertion_results.begin(),
                                       round_outcome.assertion_results.end());
        total.reached = round_outcome.reached;
        if (round_outcome.presence == PresenceVerdict::kConfirmed) {
            total.presence = PresenceVerdict::kConfirmed;
            return total;
        }
    }
    total.presence = PresenceVerdict::kAbsent;
    return total;
}

// --- JSON forms -------------------------------------------------------------------

namespace {

const char *mode_name(Assertion::Mode mode) {
    switch (mode) {
    case Assertion::Mode::kExists: return "exists";
    case Assertion::Mode::kAbsent: return "absent";
    case Assertion::Mode::kTextMatches: return "text-matches";
    case Assertion::Mode::kAttrEquals: return "attr-equals";
    }
    return "exists";
}

} // namespace

json assertion_to_json(const Assertion &a) {
    json j;
    j["selector"] = selector_to_json(a.selector);
    j["mode"] = mode_name(a.mode);
    if (a.mode == Assertion::Mode::kTextMatches) {
        j["pattern"] = a.pattern;
    }
    if (a.mode == Assertion::Mode::kAttrEquals) {
        j["key"] = a.attr_key;
        j["value"] = a.attr_value;
    }
    j["message"] = a.message;
    return j;
}

Assertion assertion_from_json(const json &j) {
    Assertion a;
    a.selector = selector_from_json(j.at("selector"));
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "exists") {
        a.mode = Assertion::Mode::kExists;
    } else if (mode == "absent") {
        a.mode = Assertion::Mode::kAbsent;
    } else if (mode == "text-matches") {
        a.mode = Assertion::Mode::kTextMatches;
        a.pattern = j.at("pattern").get<std::string>();
        regex_full_match(a.pattern, ""); // compile check
    } else if (mode == "attr-equals") {
        a.mode = Assertion::Mode::kAttrEquals;
        a.attr_key = j.at("key").get<std::string>();
        a.attr_value = j.at("value").get<std::string>();
    } else {
        throw ParseError("unknown assertion mode: " + mode);
    }
    a.message = j.value("message", "");
    if (a.message.empty()) {
        throw ParseError("assertion message must be non-empty");
    }
    return a;
}

json script_to_json(const std::vector<ScriptStep> &script) {
    json j = json::array();
    for (const ScriptStep &step : script) {
        if (step.is_act()) {
            j.push_back({{"act", operation_to_json(std::get<ScriptStep::Act>(step.step).op)}});
        } else {
            const auto &check = std::get<ScriptStep::Assert>(step.step);
            json a = assertion_to_json(check.assertion);
            if (check.scroll_until) {
                a["scroll"] = true;
            }
            j.push_back({{"assert", std::move(a)}});
        }
    }
    return j;
}

std::vector<ScriptStep> script_from_json(const json &j) {
    if (!j.is_array()) {
        throw ParseError("script must be a JSON array of steps");
    }
    std::vector<ScriptStep> script;
    for (const json &sj : j) {
        if (sj.contains("act")) {
            script.push_back(ScriptStep::act(operation_from_json(sj["act"])));
        } else if (sj.contains("assert")) {
            Assertion a = assertion_from_json(sj["assert"]);
            bool scroll = sj["assert"].value("scroll", false);
            script.push_back(ScriptStep::check(std::move(a), scroll));
        } else {
            throw ParseError("script step must be 'act' or 'assert'");
        }
    }
    return script;
}

} // namespace reqnav
