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

#include <cstdio>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "csforge/error.hpp"
#include "csforge/random.hpp"
#include "csforge/review.hpp"
#include "test_support.hpp"

using namespace csforge;
using csforge::testing::TempDir;
using nlohmann::json;

namespace {

// One Catalan word followed by `run_es` Spanish words, so the recorded
// counts and runs stay consistent with the tokens.
CsCandidate make_candidate(const std::string& id, std::size_t run_es, std::optional<std::string> audio = {}) {
    CsCandidate c;
    c.utterance = csforge::testing::make_utt(id, "");
    c.utterance.audio_path = std::move(audio);
    std::string text = "bon";
    c.tokens.push_back({"bon", TokenLang::ca, {0, 3}});
    for (std::size_t k = 0; k < run_es; ++k) {
        const auto begin = text.size() + 1;
        text += " dia";
        c.tokens.push_back({"dia", TokenLang::es, {begin, begin + 3}});
    }
    c.utterance.text = text;
    c.counts = {1, run_es, 0};
    c.max_run_es = run_es;
    c.max_run_ca = 1;
    return c;
}

std::vector<CsCandidate> make_pool(std::size_t n) {
    std::vector<CsCandidate> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(make_candidate("c" + std::to_string(i), i % 5));
    return out;
}

ReviewStore::Clock fixed_clock() {
    return [n = 0]() mutable {
        char buf[32];
        std::snprintf(buf, sizeof buf, "2026-01-01T00:%02d:%02dZ", n / 60, n % 60);
        ++n;
        return std::string(buf);
    };
}

struct StoreFixture : ::testing::Test {
    TempDir dir;
    std::filesystem::path snapshot = dir / "cands.jsonl";
    std::filesystem::path log_path = dir / "cands.decisions.jsonl";

    void write(const std::vector<CsCandidate>& cands) { save_candidates(cands, snapshot); }
    ReviewStore open() { return ReviewStore(snapshot, log_path, fixed_clock()); }
};

} // namespace

TEST_F(StoreFixture, ApplyUpdatesAndLogs) {
    write(make_pool(5));
    auto store = open();
    const auto c = store.apply("c3", Decision::accept, "anna");
    EXPECT_EQ(c.status, CandidateStatus::accepted);
    EXPECT_EQ(c.decided_by, "anna");
    EXPECT_EQ(store.get("c3").status, CandidateStatus::accepted);
    ASSERT_EQ(store.log().size(), 1u);
    EXPECT_EQ(store.log()[0].max_run_es, 3u);
    const auto body = csforge::testing::read_text(log_path);
    EXPECT_EQ(std::count(body.begin(), body.end(), '\n'), 1);
}

TEST_F(StoreFixture, RuleViolationChangesNothing) {
    write(make_pool(5));
    auto store = open();
    EXPECT_THROW(store.apply("c2", Decision::accept, "anna"), RuleViolation);
    EXPECT_EQ(store.get("c2").status, CandidateStatus::pending);
    EXPECT_TRUE(store.log().empty());
    EXPECT_FALSE(std::filesystem::exists(log_path));
    EXPECT_NO_THROW(store.apply("c2", Decision::reject, "anna"));
}

TEST_F(StoreFixture, SecondDecisionRejected) {
    write(make_pool(5));
    auto store = open();
    store.apply("c4", Decision::accept, "anna");
    EXPECT_THROW(store.apply("c4", Decision::reject, "bernat"), AlreadyDecided);
    EXPECT_THROW(store.apply("nope", Decision::reject, "bernat"), NotFound);
    EXPECT_THROW(store.apply("c1", Decision::reject, ""), InvalidArgument);
    EXPECT_EQ(store.log().size(), 1u);
}

TEST_F(StoreFixture, SurvivesRestart) {
    write(make_pool(10));
    std::vector<CsCandidate> before;
    {
        auto store = open();
        store.apply("c3", Decision::accept, "a");
        store.apply("c0", Decision::reject, "a");
        store.apply("c9", Decision::accept, "b");
        store.apply("c5", Decision::reject, "b");
        store.apply("c4", Decision::accept, "a");
        before = store.list();
    }
    auto again = open();
    EXPECT_EQ(again.list(), before);
    EXPECT_EQ(again.log().size(), 5u);
    EXPECT_EQ(again.list(CandidateStatus::accepted).size(), 3u);
    EXPECT_EQ(again.list(CandidateStatus::pending).size(), 5u);
}

TEST_F(StoreFixture, CorruptLogRefusesToLoad) {
    write(make_pool(5));
    {
        auto store = open();
        store.apply("c3", Decision::accept, "a");
    }
    // Snapshot swapped under the log: c3 now has a shorter Spanish run.
    auto pool = make_pool(5);
    pool[3] = make_candidate("c3", 1);
    write(pool);
    try {
        open();
        FAIL();
    } catch (const CorruptLogError& e) {
        EXPECT_EQ(e.line(), 1u);
        EXPECT_NE(std::string(e.what()).find("truncate"), std::string::npos);
    }

    csforge::testing::write_text(log_path, "{not json\n");
    EXPECT_THROW(open(), CorruptLogError);
}

TEST_F(StoreFixture, ExportAccepted) {
    write(make_pool(10));
    auto store = open();
    EXPECT_TRUE(store.export_accepted().empty());
    store.apply("c8", Decision::accept, "a");
    store.apply("c3", Decision::accept, "a");
    store.apply("c4", Decision::accept, "a");
    store.apply("c1", Decision::reject, "a");
    const auto m = store.export_accepted();
    ASSERT_EQ(m.size(), 3u);
    EXPECT_EQ(m.entries[0].id, "c3");
    EXPECT_EQ(m.entries[1].id, "c4");
    EXPECT_EQ(m.entries[2].id, "c8");
    EXPECT_EQ(m.entries[0], store.get("c3").utterance);
}

TEST_F(StoreFixture, Stats) {
    write(make_pool(6));
    auto store = open();
    store.apply("c3", Decision::accept, "a");
    store.apply("c0", Decision::reject, "a");
    const auto s = store.stats().to_json();
    EXPECT_EQ(s["total"], 6);
    EXPECT_EQ(s["by_status"]["pending"], 4);
    EXPECT_EQ(s["by_status"]["accepted"], 1);
    EXPECT_EQ(s["by_status"]["rejected"], 1);
    EXPECT_EQ(s["by_method"]["keyword"], 6);
}

TEST(Replay, RandomLogsReplayToSameState) {
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        auto state = make_pool(12);
        const auto initial = state;
        std::vector<DecisionLogEntry> log;
        for (int step = 0; step < 30; ++step) {
            auto& c = state[rng.uniform_index(state.size())];
            const auto d = rng.bernoulli(0.5) ? Decision::accept : Decision::reject;
            try {
                const auto ts = "t" + std::to_string(step);
                c = decide(c, d, "x", ts);
                log.push_back({c.id(), d, "x", ts, c.max_run_es});
            } catch (const Error&) {
            }
        }
        ASSERT_EQ(replay(initial, log), state);
        ASSERT_EQ(replay(initial, log), replay(initial, log));
    }
}

TEST(Replay, UnknownCandidateIsCorrupt) {
    const std::vector<DecisionLogEntry> log{{"ghost", Decision::reject, "x", "t", 0}};
    try {
        replay(make_pool(2), log);
        FAIL();
    } catch (const CorruptLogError& e) {
        EXPECT_EQ(e.line(), 1u);
    }
}

TEST(DecisionEntry, JsonRoundTrip) {
    const DecisionLogEntry e{"c1", Decision::accept, "anna", "2026-01-01T00:00:00Z", 4};
    EXPECT_EQ(decision_entry_from_json(to_json(e)), e);
    EXPECT_THROW(decision_entry_from_json(json{{"candidate_id", "c1"}}), Error);
}

TEST(Port, FromEnvironment) {
    ::unsetenv("CS_FORGE_PORT");
    EXPECT_EQ(review_port_from_env(), 8787);
    ::setenv("CS_FORGE_PORT", "9123", 1);
    EXPECT_EQ(review_port_from_env(), 9123);
    ::setenv("CS_FORGE_PORT", "http", 1);
    EXPECT_EQ(review_port_from_env(), 8787);
    ::setenv("CS_FORGE_PORT", "70000", 1);
    EXPECT_EQ(review_port_from_env(), 8787);
    ::unsetenv("CS_FORGE_PORT");
}

namespace {

struct ServerFixture : StoreFixture {
    std::unique_ptr<ReviewStore> store;
    std::unique_ptr<ReviewServer> server;
    std::thread thread;
    int port = 0;

    void SetUp() override {
        std::filesystem::create_directories(dir / "audio");
        csforge::testing::write_text(dir / "audio" / "c3.wav", "RIFF0123456789abcdef");
        csforge::testing::write_text(dir / "secret.txt", "top secret");
        auto pool = make_pool(6);
        pool[3].utterance.audio_path = "c3.wav";
        pool[4].utterance.audio_path = "../secret.txt";
        write(pool);
        store = std::make_unique<ReviewStore>(snapshot, log_path, fixed_clock());
        server = std::make_unique<ReviewServer>(*store, ReviewServerOptions{dir / "audio", std::nullopt});
        port = server->bind("127.0.0.1", 0);
        thread = std::thread([this] { server->listen(); });
    }

    void TearDown() override {
        server->stop();
        thread.join();
    }

    httplib::Client client() {
        httplib::Client cli("127.0.0.1", port);
        cli.set_connection_timeout(5);
        return cli;
    }

    httplib::Result decide_http(const std::string& id, const std::string& body) {
        auto cli = client();
        return cli.Post("/api/candidates/" + id + "/decision", body, "application/json");
    }
};

} // namespace

TEST_F(ServerFixture, ListAndFilter) {
    auto cli = client();
    auto res = cli.Get("/api/candidates");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body).size(), 6u);
    res = cli.Get("/api/candidates?status=accepted");
    EXPECT_TRUE(json::parse(res->body).empty());
    res = cli.Get("/api/candidates?status=maybe");
    EXPECT_EQ(res->status, 400);
}

TEST_F(ServerFixture, GetOne) {
    auto cli = client();
    auto res = cli.Get("/api/candidates/c2");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    const auto j = json::parse(res->body);
    EXPECT_EQ(j["id"], "c2");
    EXPECT_EQ(j["max_run_es"], 2);
    EXPECT_EQ(cli.Get("/api/candidates/zz")->status, 404);
}

TEST_F(ServerFixture, AcceptAndConflict) {
    auto res = decide_http("c3", R"({"decision":"accept","annotator":"anna"})");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body)["status"], "accepted");
    res = decide_http("c3", R"({"decision":"reject","annotator":"anna"})");
    EXPECT_EQ(res->status, 409);
    EXPECT_EQ(json::parse(res->body)["error"], "already_decided");
    EXPECT_EQ(store->get("c3").status, CandidateStatus::accepted);
}

TEST_F(ServerFixture, RuleViolationIs422WithoutStateChange) {
    const auto before = csforge::testing::read_text(snapshot);
    auto res = decide_http("c2", R"({"decision":"accept","annotator":"anna"})");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 422);
    const auto body = json::parse(res->body);
    EXPECT_EQ(body["error"], "rule_violation");
    EXPECT_EQ(body["max_run_es"], 2);
    EXPECT_EQ(body["required_run_es"], 3);
    EXPECT_EQ(store->get("c2").status, CandidateStatus::pending);
    EXPECT_FALSE(std::filesystem::exists(log_path));
    EXPECT_EQ(csforge::testing::read_text(snapshot), before);
}

TEST_F(ServerFixture, BadRequests) {
    EXPECT_EQ(decide_http("c3", "not json")->status, 400);
    EXPECT_EQ(decide_http("c3", R"({"decision":"maybe","annotator":"a"})")->status, 400);
    EXPECT_EQ(decide_http("c3", R"({"decision":"accept"})")->status, 400);
    EXPECT_EQ(decide_http("c3", R"({"decision":"accept","annotator":""})")->status, 400);
    EXPECT_EQ(decide_http("nope", R"({"decision":"accept","annotator":"a"})")->status, 404);
    EXPECT_TRUE(store->log().empty());
}

TEST_F(ServerFixture, AudioWithRange) {
    auto cli = client();
    auto res = cli.Get("/api/audio/c3");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(res->body, "RIFF0123456789abcdef");
    res = cli.Get("/api/audio/c3", httplib::Headers{{"Range", "bytes=4-7"}});
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 206);
    EXPECT_EQ(res->body, "0123");
    EXPECT_EQ(cli.Get("/api/audio/c0")->status, 404);
    EXPECT_EQ(cli.Get("/api/audio/zz")->status, 404);
}

TEST_F(ServerFixture, AudioTraversalForbidden) {
    auto res = client().Get("/api/audio/c4");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 403);
    EXPECT_EQ(res->body.find("top secret"), std::string::npos);
}

TEST_F(ServerFixture, StatsEndpoint) {
    decide_http("c4", R"({"decision":"accept","annotator":"a"})");
    decide_http("c1", R"({"decision":"reject","annotator":"a"})");
    auto res = client().Get("/api/stats");
    ASSERT_TRUE(res);
    const auto j = json::parse(res->body);
    EXPECT_EQ(j["total"], 6);
    EXPECT_EQ(j["by_status"]["accepted"], 1);
    EXPECT_EQ(j["by_status"]["rejected"], 1);
    EXPECT_EQ(j["by_status"]["pending"], 4);
}

TEST_F(ServerFixture, PortInUse) {
    ReviewServer other(*store, ReviewServerOptions{dir / "audio", std::nullopt});
    EXPECT_THROW(other.bind("127.0.0.1", port), IoError);
}

TEST(ReviewServerUi, MissingUiDirRejected) {
    TempDir dir;
    save_candidates(make_pool(1), dir / "c.jsonl");
    ReviewStore store(dir / "c.jsonl", dir / "log.jsonl");
    EXPECT_THROW(ReviewServer(store, ReviewServerOptions{dir.path(), dir / "no-ui"}), IoError);
}
