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

#ifndef REQNAV_LEXICON_HPP_
#define REQNAV_LEXICON_HPP_

#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace reqnav {

/// Word lists and the synonym table backing the deterministic lexical scorer.
/// Shipped as a data file next to the benchmark fixtures; the built-in table
/// covers the common UI vocabulary used in tests.
class Lexicon {
public:
    Lexicon() = default;

    static Lexicon builtin();
    static Lexicon load(const std::string &path);
    static Lexicon from_json(const nlohmann::json &j);

    /// Lowercased alphanumeric tokens of arbitrary text. Punctuation splits.
    static std::vector<std::string> tokens(const std::string &text);

    /// Inflection-tolerant token equality: exact, or equal after light suffix
    /// stripping, or one is a prefix of the other (min 4 chars).
    static bool token_match(const std::string &a, const std::string &b);

    /// Suffix-stripped stem used to build substring regexes that match the
    /// inflections token_match accepts ("resizing" -> "resiz").
    static std::string stem(const std::string &token);

    bool is_stop_word(const std::string &token) const { return stop_words_.count(token) > 0; }
    bool is_generic_word(const std::string &token) const { return generic_words_.count(token) > 0; }

    /// Requirement tokens minus stop words, order of first occurrence.
    std::vector<std::string> keyphrase(const std::string &requirement) const;

    /// Keyphrase minus generic aggregation words.
    std::vector<std::string> salient(const std::string &requirement) const;

    /// Strongest requirement anchors: quoted literals and mid-sentence
    /// capitalized words; falls back to the salient set when none exist.
    std::vector<std::string> evidence(const std::string &requirement) const;

    /// First double- or single-quoted literal in the requirement, if any.
    std::string quoted_literal(const std::string &requirement) const;

    bool is_removal_requirement(const std::string &requirement) const;

    /// True when the tokens are related through the synonym table (either
    /// direction, inflection-tolerant).
    bool synonymous(const std::string &a, const std::string &b) const;

    const std::set<std::string> &generic_words() const { return generic_words_; }
    const std::map<std::string, std::vector<std::string>> &synonyms() const { return synonyms_; }

private:
    std::set<std::string> stop_words_;
    std::set<std::string> generic_words_;
    std::set<std::string> removal_verbs_;
    std::map<std::string, std::vector<std::string>> synonyms_;
};

/// "(?i).*(stem1|stem2|...).*" over the stems of `tokens`; regex-special
/// characters in stems are escaped. Empty input yields an empty string.
std::string evidence_regex(const std::vector<std::string> &tokens);

} // namespace reqnav

#endif // REQNAV_LEXICON_HPP_
