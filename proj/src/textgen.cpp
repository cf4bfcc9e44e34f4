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

#include "csforge/textgen.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "csforge/random.hpp"
#include "csforge/text.hpp"

namespace csforge {

std::string_view to_string(PosTag t) {
    switch (t) {
    case PosTag::DET: return "DET";
    case PosTag::ADJ: return "ADJ";
    case PosTag::NOUN: return "NOUN";
    case PosTag::OTHER: return "OTHER";
    }
    return "OTHER";
}

PosTag parse_pos_tag(std::string_view s) {
    if (s == "DET") return PosTag::DET;
    if (s == "ADJ") return PosTag::ADJ;
    if (s == "NOUN") return PosTag::NOUN;
    if (s == "OTHER") return PosTag::OTHER;
    throw ParseError("invalid POS tag \"" + std::string(s) + "\"");
}

std::string_view to_string(SegmentLang l) { return l == SegmentLang::cat ? "cat" : "esp"; }

PosLexicon::PosLexicon(std::unordered_map<std::string, PosTag> entries) {
    for (auto& [w, t] : entries) entries_.emplace(text::normalize_word(w), t);
}

PosLexicon PosLexicon::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open POS lexicon " + path.string());
    std::unordered_map<std::string, PosTag> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto tab = trimmed.find('\t');
        if (tab == std::string::npos) throw ParseError(path.string() + ": expected word<TAB>TAG", line_no);
        try {
            entries[text::trim(trimmed.substr(0, tab))] = parse_pos_tag(text::trim(trimmed.substr(tab + 1)));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        }
    }
    return PosLexicon(std::move(entries));
}

PosTag PosLexicon::tag(std::string_view word) const {
    const auto it = entries_.find(text::normalize_word(word));
    return it == entries_.end() ? PosTag::OTHER : it->second;
}

std::string TaggedCsSentence::plain_text() const {
    std::string out;
    for (const auto& s : segments) {
        if (!out.empty()) out.push_back(' ');
        out += s.text;
    }
    return out;
}

std::size_t count_tokens(std::string_view sentence) { return tokenize(sentence).size(); }

bool within_length(std::string_view sentence, const LengthBounds& bounds) {
    const auto n = count_tokens(sentence);
    return n >= bounds.min_tokens && n <= bounds.max_tokens;
}

std::vector<std::string> filter_by_length(std::span<const std::string> sentences, const LengthBounds& bounds) {
    if (bounds.min_tokens > bounds.max_tokens) throw InvalidArgument("min_tokens must be <= max_tokens");
    std::vector<std::string> out;
    for (const auto& s : sentences) {
        if (within_length(s, bounds)) out.push_back(s);
    }
    return out;
}

std::vector<ChunkSpan> extract_noun_chunks(std::string_view text, std::span<const TaggedToken> tokens,
                                           const PosLexicon& pos) {
    std::vector<PosTag> tags;
    tags.reserve(tokens.size());
    for (const auto& t : tokens) tags.push_back(pos.tag(t.text));

    std::vector<ChunkSpan> chunks;
    const std::size_t n = tags.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        if (tags[j] == PosTag::DET) ++j;
        while (j < n && tags[j] == PosTag::ADJ) ++j;
        const std::size_t noun_start = j;
        while (j < n && tags[j] == PosTag::NOUN) ++j;
        if (j == noun_start) {
            ++i;
            continue;
        }
        while (j < n && tags[j] == PosTag::ADJ) ++j;
        const auto begin = tokens[i].span.begin;
        const auto end = tokens[j - 1].span.end;
        chunks.push_back({i, j, std::string(text.substr(begin, end - begin))});
        i = j;
    }
    return chunks;
}

namespace {

void push_segment(std::vector<Segment>& segments, SegmentLang lang, std::string text) {
    if (text.empty()) return;
    if (!segments.empty() && segments.back().lang == lang) {
        segments.back().text += " " + text;
    } else {
        segments.push_back({lang, std::move(text)});
    }
}

} // namespace

std::optional<TaggedCsSentence> generate_cs_sentence(const Utterance& u, const PosLexicon& pos,
                                                     const Translator& translator, std::uint64_t seed) {
    if (u.lang != CorpusLang::ca) throw InvalidArgument("utterance " + u.id + " is not Catalan");
    const auto tokens = tokenize(u.text);
    const auto chunks = extract_noun_chunks(u.text, tokens, pos);
    if (chunks.empty()) return std::nullopt;

    Rng rng(mix_seed(seed, u.id));
    std::vector<std::size_t> picks(chunks.size());
    std::iota(picks.begin(), picks.end(), std::size_t{0});
    rng.shuffle(picks);
    picks.resize(std::min<std::size_t>(2, picks.size()));
    std::sort(picks.begin(), picks.end());

    TaggedCsSentence out;
    out.source_id = u.id;
    std::size_t cursor = 0;
    for (const auto k : picks) {
        const auto& chunk = chunks[k];
        const auto begin = tokens[chunk.start_tok].span.begin;
        const auto end = tokens[chunk.end_tok - 1].span.end;
        push_segment(out.segments, SegmentLang::cat, text::trim(std::string_view(u.text).substr(cursor, begin - cursor)));
        std::string translated;
        try {
            translated = translator.translate(chunk.text);
        } catch (const Error& e) {
            throw Error("translating chunk \"" + chunk.text + "\" of " + u.id + ": " + e.what());
        }
        push_segment(out.segments, SegmentLang::esp, text::trim(translated));
        out.replaced_chunks.push_back({chunk, std::move(translated)});
        cursor = end;
    }
    push_segment(out.segments, SegmentLang::cat, text::trim(std::string_view(u.text).substr(cursor)));
    return out;
}

namespace {

void append_escaped(std::string& out, std::string_view s) {
    for (const char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
        }
    }
}

std::string unescape(std::string_view s, std::size_t base) {
    std::string out;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '&') {
            out.push_back(s[i]);
            continue;
        }
        if (s.substr(i, 5) == "&amp;") {
            out.push_back('&');
            i += 4;
        } else if (s.substr(i, 4) == "&lt;") {
            out.push_back('<');
            i += 3;
        } else if (s.substr(i, 4) == "&gt;") {
            out.push_back('>');
            i += 3;
        } else {
            throw TagParseError("unknown entity", base + i);
        }
    }
    return out;
}

} // namespace

std::string render_tagged(std::span<const Segment> segments) {
    std::string out;
    for (const auto& s : segments) {
        const auto tag = to_string(s.lang);
        out += "<";
        out += tag;
        out += ">";
        append_escaped(out, s.text);
        out += "</";
        out += tag;
        out += ">";
    }
    return out;
}

std::string render_tagged(const TaggedCsSentence& s) { return render_tagged(s.segments); }

std::vector<Segment> route_segments(std::string_view tagged) {
    std::vector<Segment> out;
    std::size_t pos = 0;
    const auto skip_ws = [&] {
        while (pos < tagged.size() && (tagged[pos] == ' ' || tagged[pos] == '\t' || tagged[pos] == '\n' ||
                                       tagged[pos] == '\r')) {
            ++pos;
        }
    };
    skip_ws();
    while (pos < tagged.size()) {
        SegmentLang lang;
        if (tagged.substr(pos, 5) == "<cat>") {
            lang = SegmentLang::cat;
        } else if (tagged.substr(pos, 5) == "<esp>") {
            lang = SegmentLang::esp;
        } else {
            throw TagParseError("expected <cat> or <esp>", pos);
        }
        const std::size_t body = pos + 5;
        const auto lt = tagged.find('<', body);
        if (lt == std::string_view::npos) throw TagParseError("unclosed <" + std::string(to_string(lang)) + ">", pos);
        const std::string close = "</" + std::string(to_string(lang)) + ">";
        if (tagged.substr(lt, close.size()) != close) {
            throw TagParseError("unclosed <" + std::string(to_string(lang)) + ">", pos);
        }
        out.push_back({lang, unescape(tagged.substr(body, lt - body), body)});
        pos = lt + close.size();
        skip_ws();
    }
    if (out.empty()) throw TagParseError("no tagged segments", 0);
    return out;
}

nlohmann::json to_json(const TaggedCsSentence& s) {
    nlohmann::json segments = nlohmann::json::array();
    for (const auto& seg : s.segments) segments.push_back({{"lang", to_string(seg.lang)}, {"text", seg.text}});
    nlohmann::json chunks = nlohmann::json::array();
    for (const auto& r : s.replaced_chunks) {
        chunks.push_back({{"start_tok", r.original.start_tok},
                          {"end_tok", r.original.end_tok},
                          {"source", r.original.text},
                          {"translated", r.translated}});
    }
    return {{"source_id", s.source_id}, {"segments", segments}, {"replaced_chunks", chunks}};
}

} // namespace csforge
