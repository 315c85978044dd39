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

#ifndef REQNAV_SCORER_HPP_
#define REQNAV_SCORER_HPP_

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/lexicon.hpp"
#include "reqnav/ui_model.hpp"

namespace reqnav {

/// Discrete five-level relevance; gamma is level/5 by construction.
struct RelevanceLevel {
    int level = 1; // 1..5

    double gamma() const { return static_cast<double>(level) / 5.0; }
};

struct CandidateOp {
    Operation op;
    RelevanceLevel atomic;
    std::string rationale;
};

struct ExploreResult {
    bool is_entry = false;
    // When is_entry, these are the triggering operations; otherwise navigation
    // proposals. Sorted by descending level, ties in document order.
    std::vector<CandidateOp> candidates;
};

/// Geometric mean of the gamma sequence, Eq. (prod gamma_i)^(1/d).
/// Throws EmptyPath for an empty sequence; each gamma must lie in [0.2, 1].
double path_score(const std::vector<double> &gammas);

/// Semantic relevance oracle. Implementations must be deterministic for a
/// fixed configuration and safe to call concurrently.
class Scorer {
public:
    virtual ~Scorer() = default;

    virtual ExploreResult page_explore(const std::string &requirement,
                                       const UIState &state, int k) const = 0;

    virtual const Lexicon &lexicon() const = 0;

    /// Remote-backed implementations answer script/oracle planning queries as
    /// raw wire JSON; the lexical scorer returns nullopt and callers apply the
    /// deterministic rules instead.
    virtual std::optional<nlohmann::json>
    plan_script_json(const std::string &requirement, const UIState &state,
                     const std::vector<Operation> &trigger_ops) const;

    virtual std::optional<nlohmann::json>
    plan_oracle_json(const std::string &requirement, const UIState &pre,
                     const UIState &post, const std::vector<Operation> &ops,
                     int eta) const;
};

/// Deterministic word-level stand-in for the LLM scorer. Same inputs and
/// lexicon always produce the same result.
class LexicalScorer : public Scorer {
public:
    LexicalScorer() : lexicon_(Lexicon::builtin()) {}
    explicit LexicalScorer(Lexicon lexicon) : lexicon_(std::move(lexicon)) {}

    ExploreResult page_explore(const std::string &requirement, const UIState &state,
                               int k) const override;

    const Lexicon &lexicon() const override { return lexicon_; }

    /// Five-level rubric applied in order: literal equivalence (5), synonym
    /// hit (4), container of a 4/5 element (3), generic aggregation word (2),
    /// otherwise (1).
    RelevanceLevel atomic_score(const std::string &requirement, const UIState &state,
                                const Operation &op) const;

private:
    Lexicon lexicon_;
};

} // namespace reqnav

#endif // REQNAV_SCORER_HPP_
