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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csforge {

enum class AsrLang { ca, es };

std::string_view to_string(AsrLang l);
AsrLang parse_asr_lang(std::string_view s);

// Comma-separated list such as "ca,es"; "" and "none" mean no tokens.
std::vector<AsrLang> parse_lang_tokens(std::string_view csv);
// "<ca><es>" style label, empty for no tokens.
std::string lang_tokens_label(std::span<const AsrLang> tokens);

// Decoder prompt for a Whisper-style model. The task is always transcription.
struct PromptConfig {
    std::vector<AsrLang> lang_tokens; // at most two, no duplicates
    bool timestamps = false;
    std::optional<std::string> previous_text;

    // Throws InvalidArgument.
    void validate() const;

    static PromptConfig with_tokens(std::vector<AsrLang> tokens) {
        PromptConfig c;
        c.lang_tokens = std::move(tokens);
        return c;
    }
};

inline constexpr std::string_view kStartOfPrev = "<|startofprev|>";
inline constexpr std::string_view kStartOfTranscript = "<|startoftranscript|>";
inline constexpr std::string_view kTranscribe = "<|transcribe|>";
inline constexpr std::string_view kNoTimestamps = "<|notimestamps|>";

// [<|startofprev|>, previous_text]? <|startoftranscript|> <|xx|>* <|transcribe|>
// <|notimestamps|>?  (the last one only when timestamps are off)
std::vector<std::string> build_prompt(const PromptConfig& c);

// Concatenation of build_prompt(c) with no separators.
std::string prompt_string(const PromptConfig& c);

} // namespace csforge
