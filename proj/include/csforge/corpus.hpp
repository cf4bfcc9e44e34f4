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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace csforge {

enum class CorpusLang { ca, es, mixed, unknown };
enum class Gender { male, female, unspecified };

std::string_view to_string(CorpusLang lang);
std::string_view to_string(Gender gender);
CorpusLang parse_corpus_lang(std::string_view s);
Gender parse_gender(std::string_view s);

// One transcribed audio segment. Keys the manifest reader does not know are
// kept in `extra` and written back unchanged.
struct Utterance {
    std::string id;
    std::optional<std::string> audio_path;
    std::string text;
    CorpusLang lang = CorpusLang::unknown;
    std::optional<std::string> speaker_id;
    Gender gender = Gender::unspecified;
    std::optional<double> duration_s;
    nlohmann::json extra = nlohmann::json::object();

    bool operator==(const Utterance&) const = default;
};

struct Manifest {
    std::string source_name;
    std::vector<Utterance> entries;

    double total_duration_s() const;
    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }
};

nlohmann::json to_json(const Utterance& u);
// Throws ParseError (without line) on schema violations.
Utterance utterance_from_json(const nlohmann::json& j);

// One JSON object per line; blank lines are skipped. Errors carry the 1-based
// line number. A repeated id is reported on its second occurrence.
Manifest parse_manifest(std::istream& in, std::string source_name = {});
Manifest load_manifest(const std::filesystem::path& path);

void write_manifest(const Manifest& m, std::ostream& out);
void save_manifest(const Manifest& m, const std::filesystem::path& path);

struct SplitSpec {
    double train_fraction = 0.7;
    std::uint64_t seed = 0;
};

// Seeded shuffle, then the first floor(n * train_fraction) entries go to the
// first partition and the rest to the second.
std::pair<Manifest, Manifest> split_manifest(const Manifest& m, const SplitSpec& spec);

struct ManifestStats {
    std::size_t count = 0;
    double total_hours = 0.0;
    std::size_t male = 0;
    std::size_t female = 0;
    std::size_t unspecified = 0;
    std::size_t ca = 0;
    std::size_t es = 0;
    std::size_t mixed = 0;
    std::size_t unknown = 0;
};

ManifestStats manifest_stats(const Manifest& m);

} // namespace csforge
