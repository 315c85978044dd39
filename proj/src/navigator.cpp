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

#include "reqnav/navigator.hpp"

#include <queue>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"

namespace reqnav {

using nlohmann::json;

void HistoryGraph::add_node(std::uint64_t digest, Node node) {
    nodes_.emplace(digest, std::move(node));
}

bool equivalent_state(const HistoryGraph &history, std::uint64_t base, const Operation &op) {
    return history.has_edge(base, operation_hash(op));
}

UIState replay(DeviceSession &session, const HistoryGraph &history, std::uint64_t target) {
    if (!history.has_node(target)) {
        throw ReplayDiverged(0, "target digest not in history");
    }
    const HistoryGraph::Node &node = history.node(target);
    UIState state = session.reset();
    for (size_t i = 0; i < node.path.size(); ++i) {
        state = session.perform(node.path[i]);
        if (state.digest() != node.path_digests[i]) {
            throw ReplayDiverged(i, "intermediate digest mismatch");
        }
    }
    if (state.digest() != target) {
        throw ReplayDiverged(node.path.size(), "destination digest mismatch");
    }
    return state;
}

std::pair<double, std::vector<double>> compute_score(double atomic_gamma,
                                                     const HistoryGraph &history,
                                                     std::uint64_t state_digest) {
    std::vector<double> gammas = history.node(state_digest).gammas;
    gammas.push_back(atomic_gamma);
    return {path_score(gammas), gammas};
}

namespace {

struct QueueEntry {
    std::uint64_t base = 0;
    std::optional<Operation> op; // nullopt marks the virtual launch seed
    double score = 1.0;
    std::vector<double> gammas;
    std::uint64_t seq = 0;
};

/// Max score first; FIFO among equal scores.
struct QueueOrder {
    bool operator()(const QueueEntry &a, const QueueEntry &b) const {
        if (a.score != b.score) {
            return a.score < b.score;
        }
        return a.seq > b.seq;
    }
};

// Hash marker for the virtual launch operation seeded at s0.
constexpr std::uint64_t kLaunchOpHash = 0x6c61756e63685f30ULL;

json op_to_trace(const std::optional<Operation> &op) {
    return op ? operation_to_json(*op) : json("launch");
}

} // namespace

NavResult navigate(const std::string &requirement, DeviceSession &session, int max_steps,
                   int candidates, const Scorer &scorer, const TraceSink &trace) {
    NavResult result;
    UIState current = session.reset();
    const std::uint64_t initial_digest = current.digest();

    HistoryGraph &history = result.history;
    HistoryGraph::Node initial_node;
    history.add_node(initial_digest, initial_node);

    std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
    std::uint64_t seq = 0;
    queue.push({initial_digest, std::nullopt, 1.0, {}, seq++});

    int step = 0;
    while (!queue.empty() && step < max_steps) {
        QueueEntry entry = queue.top();
        queue.pop();
        step += 1; // counted before the skip check, mirroring the search loop

        if (current.digest() != entry.base) {
            current = replay(session, history, entry.base);
        }

        const std::uint64_t op_hash =
            entry.op ? operation_hash(*entry.op) : kLaunchOpHash;
        if (history.has_edge(entry.base, op_hash)) {
            if (trace) {
                trace({{"step", step},
                       {"popped", {{"base", entry.base}, {"op", op_to_trace(entry.op)}, {"score", entry.score}}},
                       {"skipped", true}});
            }
            continue;
        }

        UIState next = entry.op ? session.perform(*entry.op) : current;
        const std::uint64_t next_digest = next.digest();
        history.add_edge(entry.base, op_hash, next_digest);
        if (!history.has_node(next_digest)) {
            HistoryGraph::Node node;
            const HistoryGraph::Node &base_node = history.node(entry.base);
            node.path = base_node.path;
            node.path_digests = base_node.path_digests;
            if (entry.op) {
                node.path.push_back(*entry.op);
                node.path_digests.push_back(next_digest);
            }
            node.gammas = entry.gammas;
            history.add_node(next_digest, std::move(node));
        }
        current = next;

        ExploreResult explored = scorer.page_explore(requirement, next, candidates);

        json pushed = json::array();
        if (explored.is_entry) {
            if (trace) {
                trace({{"step", step},
                       {"popped", {{"base", entry.base}, {"op", op_to_trace(entry.op)}, {"score", entry.score}}},
                       {"skipped", false},
                       {"new_state", next_digest},
                       {"is_entry", true},
                       {"pushed", pushed}});
            }
            result.entry = next;
            result.entry_digest = next_digest;
            std::vector<Operation> ops;
            for (const CandidateOp &cand : explored.candidates) {
                ops.push_back(cand.op);
            }
            result.trigger_ops = std::move(ops);
            result.steps_used = step;
            return result;
        }

        for (const CandidateOp &cand : explored.candidates) {
            auto [score, gammas] = compute_score(cand.atomic.gamma(), history, next_digest);
            if (trace) {
                pushed.push_back({{"op", operation_to_json(cand.op)},
                                  {"level", cand.atomic.level},
                                  {"score", score}});
            }
            queue.push({next_digest, cand.op, score, std::move(gammas), seq++});
        }
        if (trace) {
            trace({{"step", step},
                   {"popped", {{"base", entry.base}, {"op", op_to_trace(entry.op)}, {"score", entry.score}}},
                   {"skipped", false},
                   {"new_state", next_digest},
                   {"is_entry", false},
                   {"pushed", pushed}});
        }
    }

    result.steps_used = step;
    return result;
}

} // namespace reqnav
