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
#include <string>
#include <string_view>
#include <vector>

// Minimal UTF-8 helpers covering the Latin script used by Catalan and Spanish.
namespace csforge::text {

struct CodePoint {
    char32_t value;
    std::size_t offset; // byte offset into the source string
    std::size_t length; // encoded length in bytes
};

inline constexpr char32_t kReplacement = 0xFFFD;
inline constexpr char32_t kMiddleDot = 0x00B7;
inline constexpr char32_t kRightQuote = 0x2019;

// Invalid sequences decode to kReplacement, one byte at a time.
std::vector<CodePoint> decode(std::string_view s);
void append_utf8(std::string& out, char32_t cp);

bool is_letter(char32_t cp);
bool is_digit(char32_t cp);
// Characters allowed inside a word when flanked by letters: ' ’ ·
bool is_word_joiner(char32_t cp);

char32_t to_lower(char32_t cp);
char32_t to_upper(char32_t cp);
std::string to_lower(std::string_view s);

// Lowercase and fold the typographic apostrophe to ASCII.
std::string normalize_word(std::string_view s);

// Uppercases the first code point.
std::string capitalize(std::string_view s);
bool starts_upper(std::string_view s);

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);

} // namespace csforge::text
