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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "csforge/corpus.hpp"
#include "csforge/error.hpp"
#include "csforge/random.hpp"
#include "test_support.hpp"

using namespace csforge;
using csforge::testing::make_utt;

namespace {

Manifest numbered(std::size_t n) {
    Manifest m;
    for (std::size_t i = 0; i < n; ++i) m.entries.push_back(make_utt("u" + std::to_string(i), "text"));
    return m;
}

} // namespace

TEST(Manifest, ParsesInFileOrder) {
    std::istringstream in(R"({"id":"b","text":"hola","lang":"es"}
{"id":"a","text":"bon dia","lang":"ca","gender":"female","duration_s":1.5}

{"id":"c","text":"x","audio_path":"c.wav","speaker_id":"s1"}
)");
    const auto m = parse_manifest(in, "demo");
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m.entries[0].id, "b");
    EXPECT_EQ(m.entries[1].gender, Gender::female);
    EXPECT_EQ(m.entries[2].lang, CorpusLang::unknown);
    EXPECT_EQ(*m.entries[2].audio_path, "c.wav");
    EXPECT_DOUBLE_EQ(m.total_duration_s(), 1.5);
}

TEST(Manifest, DuplicateIdNamesSecondLine) {
    std::istringstream in(R"({"id":"u1","text":"a"}
{"id":"u1","text":"b"}
)");
    try {
        parse_manifest(in);
        FAIL() << "expected DuplicateIdError";
    } catch (const DuplicateIdError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.id(), "u1");
    }
}

TEST(Manifest, DuplicateOnLinesTwoAndFiveReportsFive) {
    std::istringstream in(R"({"id":"u0","text":"a"}
{"id":"u1","text":"a"}
{"id":"u2","text":"a"}
{"id":"u3","text":"a"}
{"id":"u1","text":"a"}
)");
    try {
        parse_manifest(in);
        FAIL();
    } catch (const DuplicateIdError& e) {
        EXPECT_EQ(e.line(), 5u);
    }
}

TEST(Manifest, MalformedLineCarriesLineNumber) {
    std::istringstream in("{\"id\":\"a\",\"text\":\"x\"}\n{not json\n");
    try {
        parse_manifest(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Manifest, SchemaViolationsAreRejected) {
    for (const char* line : {R"({"text":"x"})", R"({"id":"","text":"x"})", R"({"id":"a","text":"x","lang":"fr"})",
                             R"({"id":"a","text":"x","gender":"other"})", R"({"id":"a","text":"x","duration_s":-1})",
                             R"({"id":"a"})"}) {
        std::istringstream in(line);
        EXPECT_THROW(parse_manifest(in), ParseError) << line;
    }
}

TEST(Manifest, EmptyFileIsEmptyManifest) {
    std::istringstream in("");
    const auto m = parse_manifest(in);
    EXPECT_TRUE(m.empty());
    EXPECT_EQ(m.total_duration_s(), 0.0);
}

TEST(Manifest, MissingFileIsIoError) {
    EXPECT_THROW(load_manifest("/nonexistent/manifest.jsonl"), IoError);
}

TEST(Manifest, RoundTripPreservesContentAndUnknownKeys) {
    std::istringstream in(
        R"({"id":"a","text":"Hola, món!","lang":"ca","gender":"male","duration_s":2.25,"speaker_id":"s","audio_path":"a.wav","corpus":"tv3","score":{"x":1}})"
        "\n");
    const auto m = parse_manifest(in);
    EXPECT_EQ(m.entries[0].extra.at("corpus"), "tv3");
    std::ostringstream out;
    write_manifest(m, out);
    std::istringstream back(out.str());
    const auto m2 = parse_manifest(back);
    ASSERT_EQ(m2.size(), 1u);
    EXPECT_EQ(m2.entries[0], m.entries[0]);
}

TEST(Manifest, SaveLoadRoundTripOnDisk) {
    csforge::testing::TempDir dir;
    Manifest m = numbered(20);
    m.entries[3].duration_s = 0.125;
    m.entries[4].gender = Gender::female;
    save_manifest(m, dir / "sub/m.jsonl");
    const auto back = load_manifest(dir / "sub/m.jsonl");
    ASSERT_EQ(back.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) EXPECT_EQ(back.entries[i], m.entries[i]);
}

TEST(Split, SeventyThirtyOnHundred) {
    const auto [train, test] = split_manifest(numbered(100), {0.7, 1});
    EXPECT_EQ(train.size(), 70u);
    EXPECT_EQ(test.size(), 30u);
}

TEST(Split, FloorOnThree) {
    const auto [train, test] = split_manifest(numbered(3), {0.7, 9});
    EXPECT_EQ(train.size(), 2u);
    EXPECT_EQ(test.size(), 1u);
}

TEST(Split, SameSeedSamePartition) {
    const auto a = split_manifest(numbered(10), {0.7, 5});
    const auto b = split_manifest(numbered(10), {0.7, 5});
    ASSERT_EQ(a.first.size(), b.first.size());
    for (std::size_t i = 0; i < a.first.size(); ++i) EXPECT_EQ(a.first.entries[i].id, b.first.entries[i].id);
}

TEST(Split, RejectsBadInput) {
    EXPECT_THROW(split_manifest(Manifest{}, {0.7, 1}), InvalidArgument);
    EXPECT_THROW(split_manifest(numbered(4), {0.0, 1}), InvalidArgument);
    EXPECT_THROW(split_manifest(numbered(4), {1.0, 1}), InvalidArgument);
}

// Partition property over random sizes, fractions and seeds.
TEST(Split, IsAPartitionWithFloorSize) {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.uniform_index(1000);
        const double f = std::vector<double>{0.5, 0.7, 0.9}[rng.uniform_index(3)];
        const auto m = numbered(n);
        const auto [train, test] = split_manifest(m, {f, rng.next_u64()});
        ASSERT_EQ(train.size(), static_cast<std::size_t>(std::floor(static_cast<double>(n) * f + 1e-9)));
        std::multiset<std::string> seen;
        for (const auto& u : train.entries) seen.insert(u.id);
        for (const auto& u : test.entries) seen.insert(u.id);
        std::multiset<std::string> expected;
        for (const auto& u : m.entries) expected.insert(u.id);
        ASSERT_EQ(seen, expected);
    }
}

TEST(Stats, HoursAndGenderCounts) {
    Manifest m;
    m.entries.push_back(make_utt("a", "x", CorpusLang::ca, Gender::male));
    m.entries.push_back(make_utt("b", "x", CorpusLang::es, Gender::female));
    m.entries.push_back(make_utt("c", "x", CorpusLang::mixed, Gender::female));
    m.entries[0].duration_s = 3600;
    m.entries[1].duration_s = 3600;
    const auto s = manifest_stats(m);
    EXPECT_EQ(s.count, 3u);
    EXPECT_DOUBLE_EQ(s.total_hours, 2.0);
    EXPECT_EQ(s.male, 1u);
    EXPECT_EQ(s.female, 2u);
    EXPECT_EQ(s.ca, 1u);
    EXPECT_EQ(s.es, 1u);
    EXPECT_EQ(s.mixed, 1u);
}

TEST(Stats, EmptyIsAllZero) {
    const auto s = manifest_stats(Manifest{});
    EXPECT_EQ(s.count, 0u);
    EXPECT_EQ(s.total_hours, 0.0);
    EXPECT_EQ(s.male + s.female + s.unspecified, 0u);
}
