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
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "csforge/corpus.hpp"
#include "csforge/error.hpp"
#include "csforge/langid.hpp"
#include "csforge/translate.hpp"

namespace csforge {

enum class PosTag { DET, ADJ, NOUN, OTHER };

std::string_view to_string(PosTag t);
PosTag parse_pos_tag(std::string_view s);

// Word -> coarse POS for Catalan. Unknown words tag OTHER.
class PosLexicon {
public:
    PosLexicon() = default;
    explicit PosLexicon(std::unordered_map<std::string, PosTag> entries);

    // "word<TAB>TAG" lines, TAG in {DET, ADJ, NOUN, OTHER}.
    static PosLexicon load(const std::filesystem::path& path);

    PosTag tag(std::string_view word) const;
    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, PosTag> entries_;
};

struct ChunkSpan {
    std::size_t start_tok = 0;
    std::size_t end_tok = 0; // exclusive
    std::string text;

    bool operator==(const ChunkSpan&) const = default;
};

enum class SegmentLang { cat, esp };

std::string_view to_string(SegmentLang l);

struct Segment {
    SegmentLang lang = SegmentLang::cat;
    std::string text;

    bool operator==(const Segment&) const = default;
};

struct ReplacedChunk {
    ChunkSpan original;
    std::string translated;
};

// Every word of the generated sentence sits in exactly one segment; adjacent
// segments never share a language.
struct TaggedCsSentence {
    std::vector<Segment> segments;
    std::string source_id;
    std::vector<ReplacedChunk> replaced_chunks;

    std::string plain_text() const;
};

struct LengthBounds {
    std::size_t min_tokens = 4;
    std::size_t max_tokens = 25;
};

std::size_t count_tokens(std::string_view sentence);
bool within_length(std::string_view sentence, const LengthBounds& bounds);
// Keeps sentences whose token count lies in [min_tokens, max_tokens].
std::vector<std::string> filter_by_length(std::span<const std::string> sentences, const LengthBounds& bounds = {});

// Leftmost, non-overlapping, maximal matches of DET? ADJ* NOUN+ ADJ*.
// `text` is the string the tokens were cut from; chunk text is the raw
// substring covering the chunk.
std::vector<ChunkSpan> extract_noun_chunks(std::string_view text, std::span<const TaggedToken> tokens,
                                           const PosLexicon& pos);

// Replaces one or two randomly chosen noun chunks (min(2, available)) with
// their translation. The generator is seeded from (seed, u.id). Returns
// nullopt when the sentence has no noun chunk.
std::optional<TaggedCsSentence> generate_cs_sentence(const Utterance& u, const PosLexicon& pos,
                                                     const Translator& translator, std::uint64_t seed);

// "<cat>...</cat><esp>...</esp>"; '&', '<' and '>' in segment text are
// escaped as entities so the rendering always parses back.
std::string render_tagged(std::span<const Segment> segments);
std::string render_tagged(const TaggedCsSentence& s);

class TagParseError : public ParseError {
public:
    TagParseError(const std::string& what, std::size_t position)
        : ParseError(what + " at byte " + std::to_string(position)), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

// Inverse of render_tagged. Whitespace between segments is ignored.
std::vector<Segment> route_segments(std::string_view tagged);

nlohmann::json to_json(const TaggedCsSentence& s);

} // namespace csforge
