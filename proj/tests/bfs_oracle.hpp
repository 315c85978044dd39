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

#ifndef REQNAV_TESTS_BFS_ORACLE_HPP_
#define REQNAV_TESTS_BFS_ORACLE_HPP_

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "reqnav/device.hpp"
#include "reqnav/scorer.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav::testing {

/// Exhaustive breadth-first search over the simulated app, independent of the
/// navigator: enumerates every interactable element of every reachable state
/// and reports the minimum depth of a state the scorer calls an entry.
/// Returns nullopt when no reachable state qualifies.
inline std::optional<int> bfs_entry_depth(const AppSpec &app, const std::string &requirement,
                                          const Scorer &scorer, int max_depth = 12) {
    auto shared = std::make_shared<const AppSpec>(app);
    std::set<std::uint64_t> seen;
    // Each frontier entry is the operation path that reaches a state.
    std::deque<std::pair<std::vector<Operation>, int>> frontier;
    frontier.push_back({{}, 0});
    {
        DeviceSession probe(shared);
        seen.insert(probe.current().digest());
    }

    while (!frontier.empty()) {
        auto [path, depth] = frontier.front();
        frontier.pop_front();
        if (depth > max_depth) {
            continue;
        }
        DeviceSession session(shared);
        UIState state = session.current();
        for (const Operation &op : path) {
            state = session.perform(op);
        }
        if (scorer.page_explore(requirement, state, 1).is_entry) {
            return depth;
        }

        // Expand: click every clickable, type into every editable.
        std::vector<std::pair<ElementPath, const UIElement *>> elements;
        std::function<void(const UIElement &, ElementPath &)> walk =
            [&](const UIElement &elem, ElementPath &p) {
                elements.emplace_back(p, &elem);
                for (size_t i = 0; i < elem.children.size(); ++i) {
                    p.push_back(static_cast<int>(i));
                    walk(elem.children[i], p);
                    p.pop_back();
                }
            };
        ElementPath p;
        walk(state.root(), p);
        std::string payload = scorer.lexicon().quoted_literal(requirement);
        if (payload.empty()) {
            payload = "reqnav-probe";
        }
        for (const auto &[epath, elem] : elements) {
            if (!elem->enabled()) {
                continue;
            }
            bool editable = elem->attr("class") != nullptr &&
                            elem->attr("class")->find("EditText") != std::string::npos;
            if (!elem->clickable() && !editable) {
                continue;
            }
            Operation op;
            op.selector = build_selector(state, epath);
            op.action = editable ? Action::input_text(payload) : Action::click();
            DeviceSession next_session(shared);
            for (const Operation &prev : path) {
                next_session.perform(prev);
            }
            UIState next = next_session.perform(op);
            if (seen.insert(next.digest()).second) {
                std::vector<Operation> next_path = path;
                next_path.push_back(op);
                frontier.push_back({std::move(next_path), depth + 1});
            }
        }
    }
    return std::nullopt;
}

} // namespace reqnav::testing

#endif // REQNAV_TESTS_BFS_ORACLE_HPP_
