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

#ifndef REQNAV_NAVIGATOR_HPP_
#define REQNAV_NAVIGATOR_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/device.hpp"
#include "reqnav/scorer.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav {

/// Exploration history: visited states keyed by digest, expanded
/// (state, operation) edges, and one canonical operation path per state.
class HistoryGraph {
public:
    struct Node {
        std::vector<Operation> path;          // canonical ops from the initial state
        std::vector<std::uint64_t> path_digests; // digest after each op
        std::vector<double> gammas;           // atomic scores along the path
    };

    bool has_node(std::uint64_t digest) const { return nodes_.count(digest) > 0; }
    const Node &node(std::uint64_t digest) const { return nodes_.at(digest); }

    /// First write wins; the canonical path of a state never changes.
    void add_node(std::uint64_t digest, Node node);

    bool has_edge(std::uint64_t base, std::uint64_t op_hash) const {
        return edges_.count({base, op_hash}) > 0;
    }
    void add_edge(std::uint64_t base, std::uint64_t op_hash, std::uint64_t dest) {
        edges_[{base, op_hash}] = dest;
    }

    const std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> &edges() const {
        return edges_;
    }
    size_t node_count() const { return nodes_.size(); }

private:
    std::map<std::uint64_t, Node> nodes_;
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> edges_;
};

/// Eq. 1: true iff `H` already contains an expansion of an operation with the
/// same hash from a state with the same digest.
bool equivalent_state(const HistoryGraph &history, std::uint64_t base, const Operation &op);

/// Restores `target` by resetting the session and re-performing the canonical
/// path recorded in `history`. Verifies the digest after every step and at
/// the destination; throws ReplayDiverged on any mismatch.
UIState replay(DeviceSession &session, const HistoryGraph &history, std::uint64_t target);

/// Path gammas of `state_digest`'s canonical path extended with the atomic
/// score of `op`; returns the geometric-mean score and the gamma list.
std::pair<double, std::vector<double>> compute_score(double atomic_gamma,
                                                     const HistoryGraph &history,
                                                     std::uint64_t state_digest);

struct NavResult {
    std::optional<UIState> entry;                    // present iff an entry state was found
    std::optional<std::vector<Operation>> trigger_ops; // present iff entry is present
    std::optional<std::uint64_t> entry_digest;
    HistoryGraph history;
    int steps_used = 0;
};

/// One JSON line per loop iteration, for debugging and step statistics.
using TraceSink = std::function<void(const nlohmann::json &)>;

/// Requirement-guided best-first exploration. Pops the highest-score
/// (state, operation) entry (FIFO among equals), replays when the base state
/// is not current, skips already-expanded pairs, performs the operation, and
/// asks the scorer whether the reached state is an entry. Returns an absent
/// entry after `max_steps` expansions or queue exhaustion.
NavResult navigate(const std::string &requirement, DeviceSession &session, int max_steps,
                   int candidates, const Scorer &scorer, const TraceSink &trace = {});

} // namespace reqnav

#endif // REQNAV_NAVIGATOR_HPP_
