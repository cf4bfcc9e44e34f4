// Copyright 2026 The cs-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace csforge {

enum class TokenLang { ca, es, unk };

std::string_view to_string(TokenLang lang);
TokenLang parse_token_lang(std::string_view s);

// Half-open byte range into the raw transcript.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    bool operator==(const Span&) const = default;
};

// A word as it appears in the transcript, plus its language label.
struct TaggedToken {
    std::string text; // surface form, original_text.substr(span)
    TokenLang lang = TokenLang::unk;
    Span span;

    bool operator==(const TaggedToken&) const = default;
};

struct LangCounts {
    std::size_t ca = 0;
    std::size_t es = 0;
    std::size_t unk = 0;

    std::size_t total() const { return ca + es + unk; }
    bool operator==(const LangCounts&) const = default;
};

inline constexpr double kDefaultThreshold = 0.5;

// Word lists plus character n-gram log-odds (positive favours Catalan).
// Immutable once constructed; words present in both lists are moved to the
// shared set so that only n-gram evidence can label them.
class LangLexicon {
public:
    LangLexicon() = default;
    LangLexicon(std::vector<std::string> ca_words, std::vector<std::string> es_words,
                std::vector<std::string> shared_words = {},
                std::unordered_map<std::string, double> ngram_weights = {});

    // Reads ca.txt, es.txt, optional shared.txt and optional ngrams.tsv.
    static LangLexicon load(const std::filesystem::path& dir);

    bool is_ca(const std::string& word) const { return ca_.contains(word); }
    bool is_es(const std::string& word) const { return es_.contains(word); }
    bool is_shared(const std::string& word) const { return shared_.contains(word); }

    // Sum of weights over the 2- and 3-grams of an already normalized word.
    double ngram_score(std::string_view normalized) const;

    const std::unordered_set<std::string>& ca_words() const { return ca_; }
    const std::unordered_set<std::string>& es_words() const { return es_; }
    const std::unordered_set<std::string>& shared_words() const { return shared_; }
    const std::unordered_map<std::string, double>& ngram_weights() const { return ngrams_; }

private:
    std::unordered_set<std::string> ca_;
    std::unordered_set<std::string> es_;
    std::unordered_set<std::string> shared_;
    std::unordered_map<std::string, double> ngrams_;
};

// Character n-grams (code points, n = 2 and 3, no boundary padding).
std::vector<std::string> char_ngrams(std::string_view normalized);

// Maximal letter runs; apostrophes and the middle dot are kept when they sit
// between two letters ("l'home", "col·labora"). Digits and punctuation split.
std::vector<TaggedToken> tokenize(std::string_view text);

TokenLang classify_token(const TaggedToken& token, const LangLexicon& lex,
                         double threshold = kDefaultThreshold);

struct TaggedUtterance {
    std::vector<TaggedToken> tokens;
    LangCounts counts;
};

TaggedUtterance tag_utterance(std::string_view text, const LangLexicon& lex,
                              double threshold = kDefaultThreshold);

LangCounts count_labels(std::span<const TaggedToken> tokens);

// Add-alpha smoothed log-odds of n-gram frequencies between the two word
// lists. Entries with |weight| < min_abs_weight are dropped.
std::map<std::string, double> estimate_ngram_weights(const std::unordered_set<std::string>& ca_words,
                                                     const std::unordered_set<std::string>& es_words,
                                                     double alpha = 1.0, double min_abs_weight = 0.25);

} // namespace csforge
