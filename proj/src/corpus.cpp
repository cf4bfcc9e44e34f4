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

#include "csforge/corpus.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "csforge/error.hpp"
#include "csforge/random.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

std::string_view to_string(CorpusLang lang) {
    switch (lang) {
    case CorpusLang::ca: return "ca";
    case CorpusLang::es: return "es";
    case CorpusLang::mixed: return "mixed";
    case CorpusLang::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(Gender gender) {
    switch (gender) {
    case Gender::male: return "male";
    case Gender::female: return "female";
    case Gender::unspecified: return "unspecified";
    }
    return "unspecified";
}

CorpusLang parse_corpus_lang(std::string_view s) {
    if (s == "ca") return CorpusLang::ca;
    if (s == "es") return CorpusLang::es;
    if (s == "mixed") return CorpusLang::mixed;
    if (s == "unknown") return CorpusLang::unknown;
    throw ParseError("invalid lang \"" + std::string(s) + "\"");
}

Gender parse_gender(std::string_view s) {
    if (s == "male") return Gender::male;
    if (s == "female") return Gender::female;
    if (s == "unspecified") return Gender::unspecified;
    throw ParseError("invalid gender \"" + std::string(s) + "\"");
}

double Manifest::total_duration_s() const {
    double total = 0.0;
    for (const auto& u : entries) total += u.duration_s.value_or(0.0);
    return total;
}

json to_json(const Utterance& u) {
    json j = u.extra.is_object() ? u.extra : json::object();
    j["id"] = u.id;
    if (u.audio_path) j["audio_path"] = *u.audio_path;
    j["text"] = u.text;
    j["lang"] = to_string(u.lang);
    if (u.speaker_id) j["speaker_id"] = *u.speaker_id;
    j["gender"] = to_string(u.gender);
    if (u.duration_s) j["duration_s"] = *u.duration_s;
    return j;
}

namespace {

const std::string& require_string(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end()) throw ParseError(std::string("missing field \"") + key + "\"");
    if (!it->is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string");
    return it->get_ref<const std::string&>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
    const auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) throw ParseError(std::string("field \"") + key + "\" must be a string");
    return it->get<std::string>();
}

const std::unordered_set<std::string>& known_keys() {
    static const std::unordered_set<std::string> keys{"id",         "audio_path", "text",      "lang",
                                                      "speaker_id", "gender",     "duration_s"};
    return keys;
}

} // namespace

Utterance utterance_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("record is not a JSON object");
    Utterance u;
    u.id = require_string(j, "id");
    if (u.id.empty()) throw ParseError("empty id");
    u.text = require_string(j, "text");
    u.audio_path = optional_string(j, "audio_path");
    u.speaker_id = optional_string(j, "speaker_id");
    if (auto lang = optional_string(j, "lang")) u.lang = parse_corpus_lang(*lang);
    if (auto gender = optional_string(j, "gender")) u.gender = parse_gender(*gender);
    if (const auto it = j.find("duration_s"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) throw ParseError("field \"duration_s\" must be a number");
        const double d = it->get<double>();
        if (!std::isfinite(d) || d < 0.0) throw ParseError("duration_s must be finite and >= 0");
        u.duration_s = d;
    }
    for (const auto& [key, value] : j.items()) {
        if (!known_keys().contains(key)) u.extra[key] = value;
    }
    return u;
}

Manifest parse_manifest(std::istream& in, std::string source_name) {
    Manifest m;
    m.source_name = std::move(source_name);
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("malformed JSON: ") + e.what(), line_no);
        }
        Utterance u;
        try {
            u = utterance_from_json(j);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), line_no);
        }
        if (!seen.insert(u.id).second) throw DuplicateIdError(u.id, line_no);
        m.entries.push_back(std::move(u));
    }
    return m;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest " + path.string());
    try {
        return parse_manifest(in, path.stem().string());
    } catch (const DuplicateIdError& e) {
        throw DuplicateIdError(e.id(), e.line());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_manifest(const Manifest& m, std::ostream& out) {
    for (const auto& u : m.entries) out << to_json(u).dump() << '\n';
}

void save_manifest(const Manifest& m, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write manifest " + path.string());
    write_manifest(m, out);
    if (!out) throw IoError("write failed for " + path.string());
}

std::pair<Manifest, Manifest> split_manifest(const Manifest& m, const SplitSpec& spec) {
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
        throw InvalidArgument("train_fraction must lie in (0, 1)");
    }
    if (m.empty()) throw InvalidArgument("cannot split an empty manifest");

    std::vector<std::size_t> order(m.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(spec.seed);
    rng.shuffle(order);

    // The epsilon absorbs binary representation error for decimal fractions
    // such as 0.7 so that 100 * 0.7 lands on 70.
    const auto n_train = static_cast<std::size_t>(
        std::floor(static_cast<double>(m.size()) * spec.train_fraction + 1e-9));

    std::pair<Manifest, Manifest> out;
    out.first.source_name = m.source_name + ".train";
    out.second.source_name = m.source_name + ".heldout";
    for (std::size_t k = 0; k < order.size(); ++k) {
        auto& dst = k < n_train ? out.first : out.second;
        dst.entries.push_back(m.entries[order[k]]);
    }
    return out;
}

ManifestStats manifest_stats(const Manifest& m) {
    ManifestStats s;
    s.count = m.size();
    s.total_hours = m.total_duration_s() / 3600.0;
    for (const auto& u : m.entries) {
        switch (u.gender) {
        case Gender::male: ++s.male; break;
        case Gender::female: ++s.female; break;
        case Gender::unspecified: ++s.unspecified; break;
        }
        switch (u.lang) {
        case CorpusLang::ca: ++s.ca; break;
        case CorpusLang::es: ++s.es; break;
        case CorpusLang::mixed: ++s.mixed; break;
        case CorpusLang::unknown: ++s.unknown; break;
        }
    }
    return s;
}

} // namespace csforge
