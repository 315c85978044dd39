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

#ifndef REQNAV_REFINE_HPP_
#define REQNAV_REFINE_HPP_

#include <string>
#include <vector>

#include "reqnav/ui_model.hpp"

namespace reqnav {

enum class RefineTier {
    kNone,      // selector was healthy, returned unchanged
    kIndexOnly, // unique predicates, ambiguity resolved by appending an index
    kExact,     // tier 1: same attribute, exact value
    kCross,     // tier 2: same value under a different attribute
    kFuzzy,     // tier 3: case-insensitive containment
    kClass,     // tier 4: unique class match
};

struct RefineOutcome {
    Selector selector;
    RefineTier tier = RefineTier::kNone;
    // Tiers consulted, in order, before one succeeded.
    std::vector<RefineTier> tiers_tried;
};

/// Hierarchical repair of a failed or ambiguous selector: exact attribute
/// match, cross-attribute match, fuzzy value containment, then unique class
/// match. The repaired selector is rebuilt preferring resource-id over text
/// over content-desc and always resolves uniquely on `state`. Throws
/// Unrepairable when every tier comes up empty.
RefineOutcome refine_ex(const Selector &failed, const UIState &state);

/// Convenience wrapper returning just the repaired selector.
Selector refine(const Selector &failed, const UIState &state);

} // namespace reqnav

#endif // REQNAV_REFINE_HPP_
