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

#ifndef REQNAV_REMOTE_SCORER_HPP_
#define REQNAV_REMOTE_SCORER_HPP_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "reqnav/scorer.hpp"

namespace reqnav {

/// Scorer backed by a remote service speaking the POST /v1/explore,
/// /v1/script, /v1/oracle JSON contract. Replies are validated; candidate
/// selectors that fail to resolve are routed through the selector refiner and
/// dropped when unrepairable. Connection failures retry with seeded jitter
/// before surfacing ScorerUnavailable; structurally bad replies surface
/// MalformedReply.
class RemoteScorer : public Scorer {
public:
    struct Options {
        std::string endpoint;    // e.g. "http://127.0.0.1:8093"
        int timeout_ms = 5000;
        int retries = 2;         // additional attempts after the first
        std::uint64_t seed = 0;  // governs only the retry jitter
        int max_inflight = 4;
    };

    explicit RemoteScorer(Options options, Lexicon lexicon = Lexicon::builtin());
    ~RemoteScorer() override;

    ExploreResult page_explore(const std::string &requirement, const UIState &state,
                               int k) const override;

    const Lexicon &lexicon() const override { return lexicon_; }

    std::optional<nlohmann::json>
    plan_script_json(const std::string &requirement, const UIState &state,
                     const std::vector<Operation> &trigger_ops) const override;

    std::optional<nlohmann::json>
    plan_oracle_json(const std::string &requirement, const UIState &pre,
                     const UIState &post, const std::vector<Operation> &ops,
                     int eta) const override;

private:
    nlohmann::json post(const std::string &path, const nlohmann::json &body) const;

    struct Impl;
    Options options_;
    Lexicon lexicon_;
    std::unique_ptr<Impl> impl_;
};

} // namespace reqnav

#endif // REQNAV_REMOTE_SCORER_HPP_
