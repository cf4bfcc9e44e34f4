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

#include <map>
#include <set>

#include "csforge/concat.hpp"
#include "csforge/error.hpp"
#include "csforge/random.hpp"
#include "test_support.hpp"

using namespace csforge;
using csforge::testing::make_utt;

namespace {

Manifest pool(const std::string& prefix, CorpusLang lang, std::size_t n, Rng* rng = nullptr) {
    Manifest m;
    for (std::size_t i = 0; i < n; ++i) {
        Gender g = i % 2 ? Gender::female : Gender::male;
        if (rng) g = static_cast<Gender>(rng->uniform_index(3));
        m.entries.push_back(make_utt(prefix + std::to_string(i), "t", lang, g));
    }
    return m;
}

struct Tally {
    std::map<std::pair<TupleOrder, Gender>, int> ca, es;
    std::size_t ca_es = 0;
};

Tally tally(const std::vector<TupleEntry>& entries, const TuplePlan& plan) {
    std::map<std::string, Gender> g;
    for (const auto& u : plan.ca_pool.entries) g[u.id] = u.gender;
    for (const auto& u : plan.es_pool.entries) g[u.id] = u.gender;
    Tally t;
    for (const auto& e : entries) {
        ++t.ca[{e.order, g.at(e.ca_id)}];
        ++t.es[{e.order, g.at(e.es_id)}];
        t.ca_es += e.order == TupleOrder::ca_es;
    }
    return t;
}

int diff(const std::map<std::pair<TupleOrder, Gender>, int>& m, Gender g) {
    const auto get = [&](TupleOrder o) {
        const auto it = m.find({o, g});
        return it == m.end() ? 0 : it->second;
    };
    return std::abs(get(TupleOrder::ca_es) - get(TupleOrder::es_ca));
}

} // namespace

TEST(PlanTuples, ThreeHundredEach) {
    TuplePlan plan{pool("ca", CorpusLang::ca, 300), pool("es", CorpusLang::es, 300), 0.0, 17, true};
    const auto entries = plan_tuples(plan);
    ASSERT_EQ(entries.size(), 300u);
    const auto t = tally(entries, plan);
    EXPECT_EQ(t.ca_es, 150u);
    std::set<std::string> ca, es;
    for (const auto& e : entries) {
        EXPECT_TRUE(ca.insert(e.ca_id).second);
        EXPECT_TRUE(es.insert(e.es_id).second);
    }
    EXPECT_EQ(ca.size(), 300u);
    EXPECT_EQ(es.size(), 300u);
    for (const auto g : {Gender::male, Gender::female}) {
        EXPECT_LE(diff(t.ca, g), 1);
        EXPECT_LE(diff(t.es, g), 1);
    }
}

// Balance and usage properties on random pool sizes and gender mixes.
TEST(PlanTuples, BalancePropertyOnRandomPools) {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto n_ca = 1 + rng.uniform_index(60);
        const auto n_es = 1 + rng.uniform_index(60);
        TuplePlan plan{pool("c", CorpusLang::ca, n_ca, &rng), pool("e", CorpusLang::es, n_es, &rng), 0.0,
                       rng.next_u64(), true};
        const auto entries = plan_tuples(plan);
        const auto n = std::min(n_ca, n_es);
        ASSERT_EQ(entries.size(), n);
        const auto t = tally(entries, plan);
        ASSERT_EQ(t.ca_es, (n + 1) / 2);
        for (const auto g : {Gender::male, Gender::female, Gender::unspecified}) {
            ASSERT_LE(diff(t.ca, g), 1);
            ASSERT_LE(diff(t.es, g), 1);
        }
        std::set<std::string> ids;
        for (const auto& e : entries) {
            ASSERT_TRUE(ids.insert(e.ca_id).second);
            ASSERT_TRUE(ids.insert(e.es_id).second);
        }
    }
}

TEST(PlanTuples, DeterministicPerSeed) {
    TuplePlan plan{pool("ca", CorpusLang::ca, 40), pool("es", CorpusLang::es, 40), 0.0, 5, true};
    EXPECT_EQ(plan_tuples(plan), plan_tuples(plan));
    auto other = plan;
    other.seed = 6;
    EXPECT_NE(plan_tuples(plan), plan_tuples(other));
}

TEST(PlanTuples, UnequalPoolsTruncate) {
    TuplePlan plan{pool("ca", CorpusLang::ca, 10), pool("es", CorpusLang::es, 4), 0.0, 1, true};
    const auto entries = plan_tuples(plan);
    EXPECT_EQ(entries.size(), 4u);
}

TEST(PlanTuples, RejectsEmptyPoolsAndNegativeGap) {
    EXPECT_THROW(plan_tuples({Manifest{}, pool("es", CorpusLang::es, 4), 0.0, 1, true}), InvalidArgument);
    EXPECT_THROW(plan_tuples({pool("ca", CorpusLang::ca, 4), pool("es", CorpusLang::es, 4), -0.1, 1, true}),
                 InvalidArgument);
}

TEST(TupleId, OrderFirst) {
    EXPECT_EQ(tuple_id({TupleOrder::es_ca, "c/1", "e 2"}), "es_ca__e_2__c_1");
    EXPECT_EQ(tuple_id({TupleOrder::ca_es, "c1", "e2"}), "ca_es__c1__e2");
}

TEST(Materialize, ConcatenatesWithGap) {
    csforge::testing::TempDir dir;
    const auto ca = csforge::testing::make_clip_pool(dir / "ca", "ca", CorpusLang::ca, 1, 0.1);
    const auto es = csforge::testing::make_clip_pool(dir / "es", "es", CorpusLang::es, 1, 0.2);
    const MaterializeOptions opts{dir / "ca", dir / "es", dir / "out", kCanonicalRate};
    const TupleEntry e{TupleOrder::es_ca, "ca_0", "es_0"};
    const auto t = materialize_tuple(e, ca.entries[0], es.entries[0], 0.05, opts);
    EXPECT_EQ(t.first.id, "es_0");
    EXPECT_EQ(t.merged_text, es.entries[0].text + " " + ca.entries[0].text);
    EXPECT_NEAR(t.duration_s, 0.35, 1e-9);
    const auto merged = read_wav(dir / "out" / t.merged_audio_path);
    const auto first = read_wav(dir / "es/es_0.wav");
    ASSERT_EQ(merged.samples.size(), 5600u);
    for (std::size_t i = 0; i < first.samples.size(); ++i) ASSERT_EQ(merged.samples[i], first.samples[i]);
    for (std::size_t i = 3200; i < 4000; ++i) ASSERT_EQ(merged.samples[i], 0.0);

    const auto j = to_json(t);
    EXPECT_EQ(j["lang"], "mixed");
    EXPECT_EQ(j["order"], "es_ca");
    EXPECT_EQ(utterance_from_json(j).id, t.id);
}

TEST(Materialize, MismatchedEntryAndMissingAudio) {
    csforge::testing::TempDir dir;
    const MaterializeOptions opts{dir.path(), dir.path(), dir / "out", kCanonicalRate};
    const auto ca = make_utt("c", "x", CorpusLang::ca);
    const auto es = make_utt("e", "y", CorpusLang::es);
    EXPECT_THROW(materialize_tuple({TupleOrder::ca_es, "zz", "e"}, ca, es, 0, opts), InvalidArgument);
    EXPECT_THROW(materialize_tuple({TupleOrder::ca_es, "c", "e"}, ca, es, 0, opts), IoError);
}

TEST(Materialize, TotalHours) {
    std::vector<TuplePair> t(3);
    t[0].duration_s = 1800;
    t[1].duration_s = 1800;
    t[2].duration_s = 3600;
    EXPECT_DOUBLE_EQ(total_duration_hours(t), 2.0);
}
