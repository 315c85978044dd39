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

#include "reqnav/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "reqnav/refine.hpp"
#include "reqnav/trigger.hpp"

namespace reqnav {

using nlohmann::json;

// --- tree diff -------------------------------------------------------------------

namespace {

struct FlatEntry {
    ElementPath path;
    const UIElement *elem;
};

void flatten_tree(const UIElement &elem, ElementPath &path, std::vector<FlatEntry> &out) {
    out.push_back({path, &elem});
    for (size_t i = 0; i < elem.children.size(); ++i) {
        path.push_back(static_cast<int>(i));
        flatten_tree(elem.children[i], path, out);
        path.pop_back();
    }
}

std::string diff_key(const UIElement &elem) {
    const std::string *rid = elem.attr("resource-id");
    const std::string *cls = elem.attr("class");
    return (rid ? *rid : "") + "\x1f" + (cls ? *cls : "");
}

AttrMap shallow_attrs(const UIElement &elem) { return elem.attrs; }

} // namespace

TreeDiff tree_diff(const UIState &pre, const UIState &post) {
    UIState cpre = compress_tree(pre);
    UIState cpost = compress_tree(post);

    std::vector<FlatEntry> pre_flat, post_flat;
    ElementPath path;
    flatten_tree(cpre.root(), path, pre_flat);
    flatten_tree(cpost.root(), path, post_flat);

    std::map<std::string, std::vector<size_t>> pre_buckets, post_buckets;
    for (size_t i = 0; i < pre_flat.size(); ++i) {
        pre_buckets[diff_key(*pre_flat[i].elem)].push_back(i);
    }
    for (size_t i = 0; i < post_flat.size(); ++i) {
        post_buckets[diff_key(*post_flat[i].elem)].push_back(i);
    }

    TreeDiff diff;
    std::vector<bool> pre_used(pre_flat.size(), false);
    std::vector<bool> post_used(post_flat.size(), false);

    for (auto &[key, pre_idx] : pre_buckets) {
        auto post_it = post_buckets.find(key);
        if (post_it == post_buckets.end()) {
            continue;
        }
        std::vector<size_t> &post_idx = post_it->second;
        // Exact-attribute pairs first, each side consumed at most once.
        for (size_t pi : pre_idx) {
            for (size_t qi : post_idx) {
                if (pre_used[pi] || post_used[qi]) {
                    continue;
                }
                if (shallow_attrs(*pre_flat[pi].elem) == shallow_attrs(*post_flat[qi].elem)) {
                    pre_used[pi] = post_used[qi] = true;
                    diff.stable.push_back({post_flat[qi].path, *post_flat[qi].elem});
                    break;
                }
            }
        }
        // Remaining same-key elements align positionally and count as changed.
        std::vector<size_t> rest_pre, rest_post;
        for (size_t pi : pre_idx) {
            if (!pre_used[pi]) rest_pre.push_back(pi);
        }
        for (size_t qi : post_idx) {
            if (!post_used[qi]) rest_post.push_back(qi);
        }
        for (size_t i = 0; i < rest_pre.size() && i < rest_post.size(); ++i) {
            pre_used[rest_pre[i]] = post_used[rest_post[i]] = true;
            diff.changed.push_back({post_flat[rest_post[i]].path, *post_flat[rest_post[i]].elem});
        }
    }

    for (size_t i = 0; i < pre_flat.size(); ++i) {
        if (!pre_used[i]) {
            diff.removed.push_back({pre_flat[i].path, *pre_flat[i].elem});
        }
    }
    for (size_t i = 0; i < post_flat.size(); ++i) {
        if (!post_used[i]) {
            diff.added.push_back({post_flat[i].path, *post_flat[i].elem});
        }
    }
    auto by_path = [](const TreeDiff::Entry &a, const TreeDiff::Entry &b) {
        return a.path < b.path;
    };
    std::sort(diff.added.begin(), diff.added.end(), by_path);
    std::sort(diff.removed.begin(), diff.removed.end(), by_path);
    std::sort(diff.changed.begin(), diff.changed.end(), by_path);
    std::sort(diff.stable.begin(), diff.stable.end(), by_path);
    return diff;
}

// --- capture -------------------------------------------------------------------

StatePair capture_pre_post(const AppSpec &app, const std::vector<Operation> &path_to_entry,
                           const std::vector<Operation> &executed_ops) {
    DeviceSession session(std::make_shared<AppSpec>(app));
    StatePair pair;
    pair.functionality_record = executed_ops;
    try {
        UIState state = session.current();
        for (const Operation &op : path_to_entry) {
            state = session.perform(op);
        }
        if (executed_ops.empty()) {
            pair.pre = state;
            pair.post = state;
            return pair;
        }
        for (size_t i = 0; i + 1 < executed_ops.size(); ++i) {
            state = session.perform(executed_ops[i]);
        }
        pair.pre = state;
        pair.post = session.perform(executed_ops.back());
    } catch (const SelectorUnresolved &e) {
        throw ReplayDiverged(session.trace().size(), e.what());
    }
    return pair;
}

// --- generation ------------------------------------------------------------------

namespace {

std::vector<std::string> element_text_tokens(const UIElement &elem) {
    std::vector<std::string> out;
    for (const char *key : {"text", "content-desc"}) {
        if (const std::string *v = elem.attr(key)) {
            for (const std::string &tok : Lexicon::tokens(*v)) {
                out.push_back(tok);
            }
        }
    }
    return out;
}

bool matches_any(const std::vector<std::string> &tokens,
                 const std::vector<std::string> &targets) {
    return std::any_of(tokens.begin(), tokens.end(), [&](const std::string &t) {
        return std::any_of(targets.begin(), targets.end(), [&](const std::string &u) {
            return Lexicon::token_match(t, u);
        });
    });
}

/// Assertion pinned to an element: a resource-id selector checked against the
/// evidence pattern when possible, otherwise an exists check on its text.
std::optional<Assertion> anchored_assertion(const UIElement &elem,
                                            const std::string &pattern,
                                            const std::string &message) {
    Assertion a;
    if (const std::string *rid = elem.attr("resource-id"); rid && !rid->empty()) {
        a.selector = Selector::by_resource_id(*rid);
        a.mode = Assertion::Mode::kTextMatches;
        a.pattern = pattern;
    } else if (const std::string *text = elem.attr("text"); text && !text->empty()) {
        a.selector = Selector::by_text(*text);
        a.mode = Assertion::Mode::kExists;
    } else if (const std::string *cd = elem.attr("content-desc"); cd && !cd->empty()) {
        a.selector = Selector::by_content_desc(*cd);
        a.mode = Assertion::Mode::kExists;
    } else {
        return std::nullopt;
    }
    a.message = message;
    return a;
}

std::vector<SubOracle> remote_oracle(const json &reply, const StatePair &pair, int eta) {
    std::vector<SubOracle> subs;
    try {
        if (!reply.is_object() || !reply.contains("sub_oracles") ||
            !reply["sub_oracles"].is_array()) {
            throw MalformedReply("oracle reply must carry a 'sub_oracles' array");
        }
        for (const json &sj : reply["sub_oracles"]) {
            subs.push_back(sub_oracle_from_json(sj));
        }
    } catch (const ParseError &e) {
        throw MalformedReply(e.what());
    } catch (const InvalidRegex &e) {
        throw MalformedReply(e.what());
    } catch (const json::exception &e) {
        throw MalformedReply(e.what());
    }
    // Repair selectors of presence-style assertions against their target
    // state; absence assertions stay untouched. Unrepairable entries drop.
    std::vector<SubOracle> kept;
    for (SubOracle &sub : subs) {
        const UIState &target = sub.target == SubOracle::Target::kPre ? pair.pre : pair.post;
        if (sub.assertion.mode != Assertion::Mode::kAbsent &&
            resolve_selector(target, sub.assertion.selector).empty()) {
            try {
                sub.assertion.selector = refine(sub.assertion.selector, target);
            } catch (const Unrepairable &) {
                continue;
            }
        }
        kept.push_back(std::move(sub));
        if (kept.size() >= static_cast<size_t>(eta)) {
            break;
        }
    }
    if (kept.empty()) {
        throw MalformedReply("no usable sub-oracle in reply");
    }
    return kept;
}

} // namespace

std::vector<SubOracle> generate_oracle(const std::string &requirement,
                                       const StatePair &pair, int eta,
                                       const Scorer &scorer) {
    if (eta < 1) {
        throw std::invalid_argument("eta must be >= 1");
    }
    if (auto reply = scorer.plan_oracle_json(requirement, pair.pre, pair.post,
                                             pair.functionality_record, eta)) {
        return remote_oracle(*reply, pair, eta);
    }

    const Lexicon &lex = scorer.lexicon();
    const std::vector<std::string> evidence = lex.evidence(requirement);
    const bool removal = lex.is_removal_requirement(requirement);
    const std::string pattern = evidence_regex(evidence);
    TreeDiff diff = tree_diff(pair.pre, pair.post);
    // Keeps anchor pointers alive for the empty-diff branch below.
    const UIState compressed_post = compress_tree(pair.post);

    std::vector<SubOracle> rule_a, rule_b, rule_c;

    // (a) Requirement evidence on the post state, anchored to new or changed
    // elements; with an empty diff any post element may anchor. A non-removal
    // requirement with no anchor at all asserts the bare evidence pattern,
    // which fails at evaluation when the evidence truly is missing.
    std::vector<const UIElement *> anchors;
    if (!evidence.empty()) {
        if (!diff.empty()) {
            for (const auto &entries : {std::cref(diff.added), std::cref(diff.changed)}) {
                for (const TreeDiff::Entry &e : entries.get()) {
                    if (matches_any(element_text_tokens(e.element), evidence)) {
                        anchors.push_back(&e.element);
                    }
                }
            }
        } else {
            std::vector<FlatEntry> flat;
            ElementPath path;
            flatten_tree(compressed_post.root(), path, flat);
            for (const FlatEntry &fe : flat) {
                if (matches_any(element_text_tokens(*fe.elem), evidence)) {
                    anchors.push_back(fe.elem);
                }
            }
        }
        for (const UIElement *anchor : anchors) {
            if (auto a = anchored_assertion(*anchor, pattern,
                                            "expected requirement evidence on the result state")) {
                rule_a.push_back({std::move(*a), SubOracle::Target::kPost,
                                  "evidence of the requirement in the post state"});
            }
        }
    }
    if (rule_a.empty()) {
        if (diff.empty()) {
            throw NoDiffDerivable();
        }
        if (!removal && !evidence.empty()) {
            Assertion a;
            a.selector = Selector::by_text_regex(pattern);
            a.mode = Assertion::Mode::kExists;
            a.message = "no element matching the requirement evidence: " + pattern;
            rule_a.push_back({std::move(a), SubOracle::Target::kPost,
                              "requirement evidence expected somewhere on the post state"});
        }
    }

    // (b) Removal assertions: the identified target must be gone from the
    // post state (and have existed beforehand); for other requirements the
    // observed removals become absence checks.
    std::string removal_target;
    if (removal) {
        removal_target = removal_target_regex(requirement, pair.pre,
                                              pair.functionality_record, lex);
        if (!removal_target.empty()) {
            Assertion gone;
            gone.selector = Selector::by_text_regex(removal_target);
            gone.mode = Assertion::Mode::kAbsent;
            gone.message = "removed item still present: " + removal_target;
            rule_b.push_back({std::move(gone), SubOracle::Target::kPost,
                              "the removed item is gone afterwards"});
            Assertion was_there;
            was_there.selector = Selector::by_text_regex(removal_target);
            was_there.mode = Assertion::Mode::kExists;
            was_there.message = "removal target missing beforehand: " + removal_target;
            rule_b.push_back({std::move(was_there), SubOracle::Target::kPre,
                              "the removed item existed beforehand"});
        }
    } else {
        for (const TreeDiff::Entry &e : diff.removed) {
            Assertion a;
            if (const std::string *rid = e.element.attr("resource-id"); rid && !rid->empty()) {
                a.selector = Selector::by_resource_id(*rid);
            } else if (const std::string *text = e.element.attr("text"); text && !text->empty()) {
                a.selector = Selector::by_text(*text);
            } else {
                continue;
            }
            a.mode = Assertion::Mode::kAbsent;
            a.message = "element expected to disappear is still present";
            rule_b.push_back({std::move(a), SubOracle::Target::kPost,
                              "element no longer present after execution"});
        }
    }

    // (c) Stability guard. For removals: the outermost identified container
    // hosting the removed item must survive. Otherwise: one element outside
    // the diff still resolves.
    if (removal && !removal_target.empty()) {
        Selector target_sel = Selector::by_text_regex(removal_target);
        auto matches = resolve_selector(pair.pre, target_sel);
        if (!matches.empty()) {
            ElementPath path = matches.front();
            std::string outermost_rid;
            const UIElement *cur = &pair.pre.root();
            for (int idx : path) { // proper ancestors only, outermost first
                if (const std::string *rid = cur->attr("resource-id"); rid && !rid->empty()) {
                    outermost_rid = *rid;
                    break;
                }
                cur = &cur->children[static_cast<size_t>(idx)];
            }
            if (!outermost_rid.empty()) {
                Assertion a;
                a.selector = Selector::by_resource_id(outermost_rid);
                a.mode = Assertion::Mode::kExists;
                a.message = "host container of the removed item disappeared";
                rule_c.push_back({std::move(a), SubOracle::Target::kPost,
                                  "the container hosting the removed item survives"});
            }
        }
    } else {
        for (const TreeDiff::Entry &e : diff.stable) {
            if (e.path.empty()) {
                continue; // the root is an uninformative guard
            }
            Assertion a;
            if (const std::string *rid = e.element.attr("resource-id"); rid && !rid->empty()) {
                a.selector = Selector::by_resource_id(*rid);
            } else if (const std::string *text = e.element.attr("text"); text && !text->empty()) {
                a.selector = Selector::by_text(*text);
            } else {
                continue;
            }
            a.mode = Assertion::Mode::kExists;
            a.message = "unchanged region was disturbed";
            rule_c.push_back({std::move(a), SubOracle::Target::kPost,
                              "an element outside the diff is still present"});
            break; // one guard suffices
        }
    }

    // Round-robin across the rules so each contributes before any repeats.
    std::vector<SubOracle> out;
    size_t ia = 0, ib = 0, ic = 0;
    while (out.size() < static_cast<size_t>(eta)) {
        size_t before = out.size();
        if (ia < rule_a.size() && out.size() < static_cast<size_t>(eta)) {
            out.push_back(rule_a[ia++]);
        }
        if (ib < rule_b.size() && out.size() < static_cast<size_t>(eta)) {
            out.push_back(rule_b[ib++]);
        }
        if (ic < rule_c.size() && out.size() < static_cast<size_t>(eta)) {
            out.push_back(rule_c[ic++]);
        }
        if (out.size() == before) {
            break;
        }
    }
    if (out.empty()) {
        throw NoDiffDerivable();
    }
    return out;
}

Verdict evaluate(const std::vector<SubOracle> &sub_oracles, const StatePair &pair) {
    Verdict verdict;
    for (const SubOracle &sub : sub_oracles) {
        const UIState &target = sub.target == SubOracle::Target::kPre ? pair.pre : pair.post;
        verdict.sub_results.push_back({sub, evaluate_assertion(target, sub.assertion)});
    }
    verdict.pass = !verdict.sub_results.empty() &&
                   std::all_of(verdict.sub_results.begin(), verdict.sub_results.end(),
                               [](const SubResult &r) { return r.pass; });
    verdict.attribution = verdict.pass ? Phase::kNone : Phase::kPhase3;
    return verdict;
}

// --- JSON forms --------------------------------------------------------------------

json sub_oracle_to_json(const SubOracle &sub) {
    json j = assertion_to_json(sub.assertion);
    j["target"] = sub.target == SubOracle::Target::kPre ? "pre" : "post";
    if (!sub.rationale.empty()) {
        j["rationale"] = sub.rationale;
    }
    return j;
}

SubOracle sub_oracle_from_json(const json &j) {
    SubOracle sub;
    sub.assertion = assertion_from_json(j);
    const std::string target = j.value("target", "post");
    if (target == "pre") {
        sub.target = SubOracle::Target::kPre;
    } else if (target == "post") {
        sub.target = SubOracle::Target::kPost;
    } else {
        throw ParseError("sub-oracle target must be 'pre' or 'post'");
    }
    sub.rationale = j.value("rationale", "");
    return sub;
}

json verdict_to_json(const Verdict &verdict) {
    json j;
    j["decision"] = verdict.pass ? "pass" : "fail";
    j["sub_oracles"] = json::array();
    for (const SubResult &r : verdict.sub_results) {
        json sj = sub_oracle_to_json(r.sub);
        sj["pass"] = r.pass;
        j["sub_oracles"].push_back(std::move(sj));
    }
    return j;
}

} // namespace reqnav
