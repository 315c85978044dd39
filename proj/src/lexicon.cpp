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

#include "reqnav/lexicon.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"

namespace reqnav {

using nlohmann::json;

namespace {

bool word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

void push_unique(std::vector<std::string> &out, const std::string &tok) {
    if (std::find(out.begin(), out.end(), tok) == out.end()) {
        out.push_back(tok);
    }
}

std::set<std::string> to_set(const json &j, const std::string &field) {
    std::set<std::string> out;
    if (!j.is_array()) {
        throw ParseError("lexicon '" + field + "' must be an array of strings");
    }
    for (const json &v : j) {
        out.insert(lower(v.get<std::string>()));
    }
    return out;
}

} // namespace

std::vector<std::string> Lexicon::tokens(const std::string &text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (word_char(c)) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        } else if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    }
    if (!cur.empty()) {
        out.push_back(cur);
    }
    return out;
}

std::string Lexicon::stem(const std::string &token) {
    std::string t = token;
    auto ends_with = [&t](const char *suffix) {
        size_t n = std::char_traits<char>::length(suffix);
        return t.size() >= n && t.compare(t.size() - n, n, suffix) == 0;
    };
    if (ends_with("ies") && t.size() > 4) {
        t.resize(t.size() - 2); // groceries -> groceri
    } else if (ends_with("ing") && t.size() > 5) {
        t.resize(t.size() - 3); // resizing -> resiz
    } else if (ends_with("ed") && t.size() > 4) {
        t.resize(t.size() - 2); // resized -> resiz
    } else if (ends_with("s") && !ends_with("ss") && t.size() > 3) {
        t.resize(t.size() - 1); // notes -> note
    } else if (ends_with("y") && t.size() > 4) {
        t.back() = 'i'; // category -> categori, pairing with categories
    }
    return t;
}

bool Lexicon::token_match(const std::string &a, const std::string &b) {
    if (a == b) {
        return true;
    }
    std::string sa = stem(a);
    std::string sb = stem(b);
    if (sa == sb) {
        return true;
    }
    const std::string &shorter = sa.size() <= sb.size() ? sa : sb;
    const std::string &longer = sa.size() <= sb.size() ? sb : sa;
    return shorter.size() >= 4 && longer.compare(0, shorter.size(), shorter) == 0;
}

std::vector<std::string> Lexicon::keyphrase(const std::string &requirement) const {
    std::vector<std::string> out;
    for (const std::string &tok : tokens(requirement)) {
        if (!is_stop_word(tok)) {
            push_unique(out, tok);
        }
    }
    return out;
}

std::vector<std::string> Lexicon::salient(const std::string &requirement) const {
    std::vector<std::string> out;
    for (const std::string &tok : keyphrase(requirement)) {
        if (!is_generic_word(tok)) {
            push_unique(out, tok);
        }
    }
    return out;
}

std::string Lexicon::quoted_literal(const std::string &requirement) const {
    for (char quote : {'"', '\''}) {
        size_t b = requirement.find(quote);
        if (b == std::string::npos) {
            continue;
        }
        size_t e = requirement.find(quote, b + 1);
        if (e != std::string::npos && e > b + 1) {
            return requirement.substr(b + 1, e - b - 1);
        }
    }
    return "";
}

std::vector<std::string> Lexicon::evidence(const std::string &requirement) const {
    std::vector<std::string> strong;
    for (const std::string &tok : tokens(quoted_literal(requirement))) {
        if (!is_stop_word(tok) && !is_generic_word(tok)) {
            push_unique(strong, tok);
        }
    }
    // Mid-sentence capitalized words read as proper nouns ("especially
    // Bengali"). Sentence-initial words do not count.
    bool sentence_start = true;
    std::string word;
    bool capitalized = false;
    auto flush = [&]() {
        if (!word.empty()) {
            if (capitalized && !sentence_start) {
                std::string tok = lower(word);
                if (!is_stop_word(tok) && !is_generic_word(tok)) {
                    push_unique(strong, tok);
                }
            }
            sentence_start = false;
            word.clear();
            capitalized = false;
        }
    };
    for (char c : requirement) {
        if (word_char(c)) {
            if (word.empty()) {
                capitalized = std::isupper(static_cast<unsigned char>(c)) != 0;
            }
            word.push_back(c);
        } else {
            flush();
            if (c == '.' || c == '!' || c == '?') {
                sentence_start = true;
            }
        }
    }
    flush();
    if (!strong.empty()) {
        return strong;
    }
    return salient(requirement);
}

bool Lexicon::is_removal_requirement(const std::string &requirement) const {
    for (const std::string &tok : tokens(requirement)) {
        for (const std::string &verb : removal_verbs_) {
            if (token_match(tok, verb)) {
                return true;
            }
        }
    }
    return false;
}

bool Lexicon::synonymous(const std::string &a, const std::string &b) const {
    auto related = [this](const std::string &key, const std::string &other) {
        for (const auto &[word, syns] : synonyms_) {
            if (!token_match(word, key)) {
                continue;
            }
            for (const std::string &syn : syns) {
                if (token_match(syn, other)) {
                    return true;
                }
            }
        }
        return false;
    };
    return related(a, b) || related(b, a);
}

std::string evidence_regex(const std::vector<std::string> &tokens) {
    if (tokens.empty()) {
        return "";
    }
    std::string alternatives;
    for (const std::string &tok : tokens) {
        if (!alternatives.empty()) {
            alternatives += "|";
        }
        for (char c : Lexicon::stem(tok)) {
            if (std::isalnum(static_cast<unsigned char>(c)) == 0) {
                alternatives += '\\';
            }
            alternatives += c;
        }
    }
    return "(?i).*(" + alternatives + ").*";
}

Lexicon Lexicon::from_json(const json &j) {
    Lexicon lex;
    if (j.contains("stop_words")) lex.stop_words_ = to_set(j["stop_words"], "stop_words");
    if (j.contains("generic_words")) lex.generic_words_ = to_set(j["generic_words"], "generic_words");
    if (j.contains("removal_verbs")) lex.removal_verbs_ = to_set(j["removal_verbs"], "removal_verbs");
    if (j.contains("synonyms")) {
        if (!j["synonyms"].is_object()) {
            throw ParseError("lexicon 'synonyms' must be an object");
        }
        for (auto it = j["synonyms"].begin(); it != j["synonyms"].end(); ++it) {
            std::vector<std::string> syns;
            for (const json &v : it.value()) {
                syns.push_back(lower(v.get<std::string>()));
            }
            lex.synonyms_[lower(it.key())] = std::move(syns);
        }
    }
    return lex;
}

Lexicon Lexicon::load(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IOError("cannot open lexicon file: " + path);
    }
    json j;
    try {
        in >> j;
    } catch (const json::exception &e) {
        throw ParseError("lexicon " + path + ": " + e.what());
    }
    return from_json(j);
}

Lexicon Lexicon::builtin() {
    static const char *kBuiltin = R"({
  "stop_words": [
    "a", "an", "the", "i", "me", "my", "we", "it", "its", "this", "that",
    "to", "for", "of", "in", "on", "at", "with", "within", "as", "by",
    "and", "or", "so", "if", "is", "be", "am", "are", "was", "has", "have",
    "had", "do", "does", "can", "could", "would", "should", "will",
    "want", "wish", "need", "like", "please", "app", "application",
    "when", "before", "after", "especially", "also", "there", "just", "provide",
    "provided", "button", "page", "window", "view", "feature", "function",
    "functionality", "current", "currently", "able"
  ],
  "generic_words": ["settings", "options", "option", "more", "menu", "preferences", "tools"],
  "removal_verbs": ["delete", "remove", "clear", "erase", "discard"],
  "synonyms": {
    "option": ["settings", "preferences"],
    "mode": ["theme", "appearance"],
    "theme": ["appearance", "mode"],
    "dark": ["night"],
    "language": ["locale"],
    "note": ["list", "item"],
    "picture": ["photo", "image", "gallery"],
    "resize": ["crop", "scale"],
    "rotate": ["edit"],
    "search": ["find", "lookup"],
    "share": ["send", "export"],
    "font": ["text", "appearance"],
    "size": ["font"],
    "sort": ["order", "arrange"],
    "category": ["section", "topic"],
    "refresh": ["reload", "update"],
    "bookmark": ["favorite", "saved"]
  }
})";
    return from_json(json::parse(kBuiltin));
}

} // namespace reqnav
