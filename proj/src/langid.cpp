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

#include "csforge/langid.hpp"

#include <cmath>
#include <fstream>

#include "csforge/error.hpp"
#include "csforge/text.hpp"

namespace csforge {

std::string_view to_string(TokenLang lang) {
    switch (lang) {
    case TokenLang::ca: return "ca";
    case TokenLang::es: return "es";
    case TokenLang::unk: return "unk";
    }
    return "unk";
}

TokenLang parse_token_lang(std::string_view s) {
    if (s == "ca") return TokenLang::ca;
    if (s == "es") return TokenLang::es;
    if (s == "unk") return TokenLang::unk;
    throw ParseError("invalid token language \"" + std::string(s) + "\"");
}

LangLexicon::LangLexicon(std::vector<std::string> ca_words, std::vector<std::string> es_words,
                         std::vector<std::string> shared_words,
                         std::unordered_map<std::string, double> ngram_weights)
    : ngrams_(std::move(ngram_weights)) {
    for (auto& w : shared_words) shared_.insert(text::normalize_word(w));
    std::unordered_set<std::string> es;
    for (auto& w : es_words) es.insert(text::normalize_word(w));
    for (auto& w : ca_words) {
        auto n = text::normalize_word(w);
        if (es.contains(n)) {
            shared_.insert(n);
        } else {
            ca_.insert(std::move(n));
        }
    }
    for (const auto& w : es) {
        if (!shared_.contains(w)) es_.insert(w);
    }
    for (const auto& w : shared_) ca_.erase(w);
    for (const auto& [gram, weight] : ngrams_) {
        if (!std::isfinite(weight)) throw ParseError("non-finite n-gram weight for \"" + gram + "\"");
    }
}

namespace {

std::vector<std::string> read_word_list(const std::filesystem::path& path, bool required) {
    std::ifstream in(path);
    if (!in) {
        if (required) throw IoError("cannot open word list " + path.string());
        return {};
    }
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = text::trim(line);
        if (w.empty() || w.front() == '#') continue;
        words.push_back(std::move(w));
    }
    return words;
}

std::unordered_map<std::string, double> read_ngrams(const std::filesystem::path& path) {
    std::unordered_map<std::string, double> out;
    std::ifstream in(path);
    if (!in) return out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto tab = trimmed.find('\t');
        if (tab == std::string::npos) throw ParseError(path.string() + ": expected ngram<TAB>weight", line_no);
        const auto gram = trimmed.substr(0, tab);
        const auto value = trimmed.substr(tab + 1);
        if (gram == "ngram" && value == "weight") continue;
        double weight = 0.0;
        try {
            std::size_t used = 0;
            weight = std::stod(value, &used);
            if (used != value.size()) throw std::invalid_argument(value);
        } catch (const std::exception&) {
            throw ParseError(path.string() + ": bad weight \"" + value + "\"", line_no);
        }
        if (!std::isfinite(weight)) throw ParseError(path.string() + ": non-finite weight", line_no);
        out[text::normalize_word(gram)] = weight;
    }
    return out;
}

} // namespace

LangLexicon LangLexicon::load(const std::filesystem::path& dir) {
    return LangLexicon(read_word_list(dir / "ca.txt", true), read_word_list(dir / "es.txt", true),
                       read_word_list(dir / "shared.txt", false), read_ngrams(dir / "ngrams.tsv"));
}

std::vector<std::string> char_ngrams(std::string_view normalized) {
    const auto cps = text::decode(normalized);
    std::vector<std::string> grams;
    for (std::size_t n = 2; n <= 3; ++n) {
        for (std::size_t i = 0; i + n <= cps.size(); ++i) {
            const auto begin = cps[i].offset;
            const auto end = cps[i + n - 1].offset + cps[i + n - 1].length;
            grams.emplace_back(normalized.substr(begin, end - begin));
        }
    }
    return grams;
}

double LangLexicon::ngram_score(std::string_view normalized) const {
    double score = 0.0;
    for (const auto& g : char_ngrams(normalized)) {
        if (const auto it = ngrams_.find(g); it != ngrams_.end()) score += it->second;
    }
    return score;
}

std::vector<TaggedToken> tokenize(std::string_view text) {
    const auto cps = text::decode(text);
    std::vector<TaggedToken> tokens;
    std::size_t i = 0;
    while (i < cps.size()) {
        if (!text::is_letter(cps[i].value)) {
            ++i;
            continue;
        }
        std::size_t j = i + 1;
        while (j < cps.size()) {
            if (text::is_letter(cps[j].value)) {
                ++j;
            } else if (text::is_word_joiner(cps[j].value) && j + 1 < cps.size() &&
                       text::is_letter(cps[j + 1].value)) {
                j += 2;
            } else {
                break;
            }
        }
        const Span span{cps[i].offset, cps[j - 1].offset + cps[j - 1].length};
        tokens.push_back({std::string(text.substr(span.begin, span.size())), TokenLang::unk, span});
        i = j;
    }
    return tokens;
}

TokenLang classify_token(const TaggedToken& token, const LangLexicon& lex, double threshold) {
    const auto word = text::normalize_word(token.text);
    if (!lex.is_shared(word)) {
        if (lex.is_ca(word)) return TokenLang::ca;
        if (lex.is_es(word)) return TokenLang::es;
    }
    const double score = lex.ngram_score(word);
    if (score > threshold) return TokenLang::ca;
    if (score < -threshold) return TokenLang::es;
    return TokenLang::unk;
}

LangCounts count_labels(std::span<const TaggedToken> tokens) {
    LangCounts c;
    for (const auto& t : tokens) {
        switch (t.lang) {
        case TokenLang::ca: ++c.ca; break;
        case TokenLang::es: ++c.es; break;
        case TokenLang::unk: ++c.unk; break;
        }
    }
    return c;
}

TaggedUtterance tag_utterance(std::string_view text, const LangLexicon& lex, double threshold) {
    TaggedUtterance out;
    out.tokens = tokenize(text);
    for (auto& t : out.tokens) t.lang = classify_token(t, lex, threshold);
    out.counts = count_labels(out.tokens);
    return out;
}

std::map<std::string, double> estimate_ngram_weights(const std::unordered_set<std::string>& ca_words,
                                                     const std::unordered_set<std::string>& es_words,
                                                     double alpha, double min_abs_weight) {
    std::map<std::string, std::pair<double, double>> counts;
    double n_ca = 0.0;
    double n_es = 0.0;
    for (const auto& w : ca_words) {
        for (const auto& g : char_ngrams(w)) {
            counts[g].first += 1.0;
            n_ca += 1.0;
        }
    }
    for (const auto& w : es_words) {
        for (const auto& g : char_ngrams(w)) {
            counts[g].second += 1.0;
            n_es += 1.0;
        }
    }
    const double vocab = static_cast<double>(counts.size());
    std::map<std::string, double> weights;
    for (const auto& [gram, c] : counts) {
        const double p_ca = (c.first + alpha) / (n_ca + alpha * vocab);
        const double p_es = (c.second + alpha) / (n_es + alpha * vocab);
        const double w = std::log(p_ca / p_es);
        if (std::fabs(w) >= min_abs_weight) weights[gram] = w;
    }
    return weights;
}

} // namespace csforge
