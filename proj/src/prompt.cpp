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

#include "csforge/prompt.hpp"

#include <algorithm>

#include "csforge/error.hpp"
#include "csforge/text.hpp"

namespace csforge {

std::string_view to_string(AsrLang l) { return l == AsrLang::ca ? "ca" : "es"; }

AsrLang parse_asr_lang(std::string_view s) {
    if (s == "ca") return AsrLang::ca;
    if (s == "es") return AsrLang::es;
    throw InvalidArgument("unsupported language token \"" + std::string(s) + "\" (expected ca or es)");
}

std::vector<AsrLang> parse_lang_tokens(std::string_view csv) {
    const auto trimmed = text::trim(csv);
    if (trimmed.empty() || trimmed == "none") return {};
    std::vector<AsrLang> out;
    for (const auto& part : text::split(trimmed, ',')) out.push_back(parse_asr_lang(text::trim(part)));
    return out;
}

std::string lang_tokens_label(std::span<const AsrLang> tokens) {
    std::string out;
    for (const auto t : tokens) {
        out += "<";
        out += to_string(t);
        out += ">";
    }
    return out;
}

void PromptConfig::validate() const {
    if (lang_tokens.size() > 2) throw InvalidArgument("at most two language tokens are allowed");
    if (lang_tokens.size() == 2 && lang_tokens[0] == lang_tokens[1]) {
        throw InvalidArgument("duplicate language token <|" + std::string(to_string(lang_tokens[0])) + "|>");
    }
}

std::vector<std::string> build_prompt(const PromptConfig& c) {
    c.validate();
    std::vector<std::string> out;
    if (c.previous_text) {
        out.emplace_back(kStartOfPrev);
        out.push_back(*c.previous_text);
    }
    out.emplace_back(kStartOfTranscript);
    for (const auto l : c.lang_tokens) out.push_back("<|" + std::string(to_string(l)) + "|>");
    out.emplace_back(kTranscribe);
    if (!c.timestamps) out.emplace_back(kNoTimestamps);
    return out;
}

std::string prompt_string(const PromptConfig& c) {
    std::string out;
    for (const auto& t : build_prompt(c)) out += t;
    return out;
}

} // namespace csforge
