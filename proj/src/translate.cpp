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

#include "csforge/translate.hpp"

#include <fstream>

#include "csforge/error.hpp"
#include "csforge/langid.hpp"
#include "csforge/text.hpp"

namespace csforge {

DictionaryTranslator::DictionaryTranslator(std::unordered_map<std::string, std::string> entries) {
    for (auto& [src, dst] : entries) entries_.emplace(text::normalize_word(src), std::move(dst));
}

DictionaryTranslator DictionaryTranslator::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dictionary " + path.string());
    std::unordered_map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto trimmed = text::trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto tab = trimmed.find('\t');
        if (tab == std::string::npos) throw ParseError(path.string() + ": expected source<TAB>target", line_no);
        entries[text::trim(trimmed.substr(0, tab))] = text::trim(trimmed.substr(tab + 1));
    }
    return DictionaryTranslator(std::move(entries));
}

std::string DictionaryTranslator::translate(std::string_view src) const {
    if (text::trim(src).empty()) throw InvalidArgument("cannot translate empty text");
    std::string out;
    std::size_t cursor = 0;
    for (const auto& tok : tokenize(src)) {
        out.append(src.substr(cursor, tok.span.begin - cursor));
        const auto it = entries_.find(text::normalize_word(tok.text));
        if (it == entries_.end()) {
            out.append(tok.text);
        } else {
            out.append(text::starts_upper(tok.text) ? text::capitalize(it->second) : it->second);
        }
        cursor = tok.span.end;
    }
    out.append(src.substr(cursor));
    return out;
}

} // namespace csforge
