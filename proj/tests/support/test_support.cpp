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

#include "test_support.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace csforge::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return CSFORGE_SOURCE_DIR; }
fs::path fixture(const std::string& rel) { return source_dir() / "fixtures" / rel; }
fs::path test_fixture(const std::string& rel) { return source_dir() / "tests" / "fixtures" / rel; }

TempDir::TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "csforge-test-XXXXXX").string();
    if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
}

TempDir::~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
}

AudioBuffer sine(double freq_hz, double seconds, double amplitude, int sample_rate) {
    AudioBuffer b;
    b.sample_rate = sample_rate;
    const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
    b.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        b.samples[i] = amplitude * std::sin(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / sample_rate);
    }
    return b;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
}

Utterance make_utt(std::string id, std::string text, CorpusLang lang, Gender gender) {
    Utterance u;
    u.id = std::move(id);
    u.text = std::move(text);
    u.lang = lang;
    u.gender = gender;
    return u;
}

Manifest make_clip_pool(const fs::path& dir, const std::string& prefix, CorpusLang lang, std::size_t n,
                        double seconds) {
    Manifest m;
    m.source_name = prefix;
    fs::create_directories(dir);
    for (std::size_t k = 0; k < n; ++k) {
        Utterance u;
        u.id = prefix + "_" + std::to_string(k);
        u.audio_path = u.id + ".wav";
        u.text = (lang == CorpusLang::ca ? "frase catalana " : "frase castellana ") + std::to_string(k);
        u.lang = lang;
        u.gender = k % 2 == 0 ? Gender::male : Gender::female;
        u.speaker_id = prefix + "_spk" + std::to_string(k % 7);
        const auto audio = sine(200.0 + 10.0 * static_cast<double>(k % 50), seconds, 0.3);
        write_wav(audio, dir / *u.audio_path);
        u.duration_s = audio.duration_s();
        m.entries.push_back(std::move(u));
    }
    return m;
}

} // namespace csforge::testing
