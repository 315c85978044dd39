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

#ifndef REQNAV_ORACLE_HPP_
#define REQNAV_ORACLE_HPP_

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/device.hpp"
#include "reqnav/scorer.hpp"
#include "reqnav/trigger.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav {

enum class Phase { kNone, kPhase1, kPhase2, kPhase3 };

/// Pre/post-execution snapshot around the committing operation, plus the
/// executed operations as the functionality record.
struct StatePair {
    UIState pre;
    UIState post;
    std::vector<Operation> functionality_record;
};

struct SubOracle {
    enum class Target { kPre, kPost };
    Assertion assertion;
    Target target = Target::kPost;
    std::string rationale;
};

struct SubResult {
    SubOracle sub;
    bool pass = false;
};

struct Verdict {
    bool pass = false;
    std::vector<SubResult> sub_results;
    Phase attribution = Phase::kNone; // kPhase3 on failure here
};

/// Element-level difference between the compressed pre and post trees.
/// Elements pair up by (resource-id, class) key, exact-attribute matches
/// first, then positionally; paired elements with an attribute delta are
/// changed, unpaired ones added or removed.
struct TreeDiff {
    struct Entry {
        ElementPath path; // in the tree the entry belongs to
        UIElement element;
    };
    std::vector<Entry> added;      // only in post
    std::vector<Entry> removed;    // only in pre
    std::vector<Entry> changed;    // post side of a pair with an attribute delta
    std::vector<Entry> stable;     // post side of an unchanged pair
    bool empty() const { return added.empty() && removed.empty() && changed.empty(); }
};

TreeDiff tree_diff(const UIState &pre, const UIState &post);

/// Replays the navigation path and the executed operations on a fresh
/// session: pre is the state immediately before the final committing
/// operation, post the state after execution completes. Throws
/// ReplayDiverged when the replayed digests disagree with `expected_pre` /
/// `expected_post` (when provided).
StatePair capture_pre_post(const AppSpec &app, const std::vector<Operation> &path_to_entry,
                           const std::vector<Operation> &executed_ops);

/// Derives at most `eta` sub-oracles from the requirement and the pre/post
/// difference. Rule order: requirement evidence on the post state (anchored
/// to new or changed elements; an unanchored must-exist assertion when a
/// non-removal requirement finds no anchor), removal assertions, and one
/// stability guard. Remote scorers answer via /v1/oracle with the same
/// validation and repair pipeline. Throws NoDiffDerivable when the diff is
/// empty and nothing on the post state matches the requirement evidence.
std::vector<SubOracle> generate_oracle(const std::string &requirement,
                                       const StatePair &pair, int eta,
                                       const Scorer &scorer);

/// Evaluates each sub-oracle against its target state; the decision is the
/// conjunction of all sub-results.
Verdict evaluate(const std::vector<SubOracle> &sub_oracles, const StatePair &pair);

nlohmann::json sub_oracle_to_json(const SubOracle &sub);
SubOracle sub_oracle_from_json(const nlohmann::json &j);
nlohmann::json verdict_to_json(const Verdict &verdict);

} // namespace reqnav

#endif // REQNAV_ORACLE_HPP_
