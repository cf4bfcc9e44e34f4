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

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>

namespace csforge {

// Catalan -> Spanish text translation.
class Translator {
public:
    virtual ~Translator() = default;
    // Throws InvalidArgument on empty input.
    virtual std::string translate(std::string_view text) const = 0;
};

// Offline word-by-word fallback. Words are looked up lowercased; unknown
// words pass through unchanged, as do spacing and punctuation. A capitalized
// source word yields a capitalized translation.
class DictionaryTranslator : public Translator {
public:
    explicit DictionaryTranslator(std::unordered_map<std::string, std::string> entries);

    // Tab-separated "catalan<TAB>spanish" lines; '#' comments allowed.
    static DictionaryTranslator load(const std::filesystem::path& path);

    std::string translate(std::string_view text) const override;

    std::size_t size() const { return entries_.size(); }

private:
    std::unordered_map<std::string, std::string> entries_;
};

} // namespace csforge
