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

#include <chrono>

#include "csforge/clients.hpp"
#include "csforge/error.hpp"
#include "mock_services.hpp"
#include "test_support.hpp"

using namespace csforge;
using csforge::testing::MockServices;

namespace {

RetryPolicy fast() {
    RetryPolicy p;
    p.initial_backoff = std::chrono::milliseconds(1);
    p.connect_timeout = std::chrono::milliseconds(500);
    p.read_timeout = std::chrono::milliseconds(5000);
    return p;
}

} // namespace

TEST(Endpoint, Parse) {
    const auto e = Endpoint::parse("http://localhost:9000/asr/");
    EXPECT_EQ(e.scheme_host_port, "http://localhost:9000");
    EXPECT_EQ(e.path("/v1/transcribe"), "/asr/v1/transcribe");
    EXPECT_EQ(Endpoint::parse("http://h").path("/x"), "/x");
    EXPECT_THROW(Endpoint::parse("https://h"), InvalidArgument);
    EXPECT_THROW(Endpoint::parse("http://"), InvalidArgument);
}

TEST(RequestId, StableAndPrefixed) {
    EXPECT_EQ(content_request_id("mt", "hola"), content_request_id("mt", "hola"));
    EXPECT_NE(content_request_id("mt", "hola"), content_request_id("mt", "adeu"));
    EXPECT_EQ(content_request_id("mt", "x").rfind("mt-", 0), 0u);
}

class ClientsTest : public ::testing::Test {
protected:
    MockServices mock;
    csforge::testing::TempDir dir;

    std::filesystem::path wav(const std::string& name) {
        const auto p = dir / name;
        write_wav(csforge::testing::sine(300, 0.05, 0.2), p);
        return p;
    }
};

TEST_F(ClientsTest, TranscribeSendsPromptAndAudio) {
    mock.set_transcript("u1", "bon dia y buenos días");
    const AsrClient client(mock.url(), fast());
    const auto text = client.transcribe({"u1", wav("u1.wav"), PromptConfig::with_tokens({AsrLang::ca, AsrLang::es}), "whisper-large-v3"});
    EXPECT_EQ(text, "bon dia y buenos días");
    const auto calls = mock.asr_calls();
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0].prompt, "<|startoftranscript|><|ca|><|es|><|transcribe|><|notimestamps|>");
    EXPECT_EQ(calls[0].prompt_tokens.size(), 5u);
    EXPECT_EQ(calls[0].model_id, "whisper-large-v3");
    EXPECT_GT(calls[0].audio_bytes, 44u);
}

TEST_F(ClientsTest, RetriesServerErrors) {
    mock.set_transcript("u1", "ok");
    mock.fail_next(2, 503);
    const AsrClient client(mock.url(), fast());
    EXPECT_EQ(client.transcribe({"u1", wav("u1.wav"), {}, "m"}), "ok");
    EXPECT_EQ(mock.total_requests(), 3);
}

TEST_F(ClientsTest, GivesUpAfterMaxAttempts) {
    mock.fail_next(3, 429);
    const AsrClient client(mock.url(), fast());
    try {
        client.transcribe({"u1", wav("u1.wav"), {}, "m"});
        FAIL();
    } catch (const ServiceError& e) {
        EXPECT_EQ(e.status(), 429);
    }
    EXPECT_EQ(mock.total_requests(), 3);
}

TEST_F(ClientsTest, ClientErrorsAreNotRetried) {
    mock.fail_next(1, 400);
    const AsrClient client(mock.url(), fast());
    try {
        client.transcribe({"u1", wav("u1.wav"), {}, "m"});
        FAIL();
    } catch (const ServiceError& e) {
        EXPECT_EQ(e.status(), 400);
        EXPECT_NE(e.body().find("injected"), std::string::npos);
    }
    EXPECT_EQ(mock.total_requests(), 1);
}

TEST_F(ClientsTest, UnreachableIsNetworkError) {
    const int port = mock.port();
    const AsrClient client("http://127.0.0.1:1", fast());
    try {
        client.transcribe({"u1", wav("u1.wav"), {}, "m"});
        FAIL();
    } catch (const NetworkError& e) {
        EXPECT_EQ(e.attempts(), 3);
    }
    (void)port;
}

TEST_F(ClientsTest, BatchKeepsRequestOrderAndBoundsConcurrency) {
    std::vector<AsrRequest> reqs;
    for (int i = 0; i < 24; ++i) {
        const auto id = "u" + std::to_string(i);
        mock.set_transcript(id, "text " + std::to_string(i));
        reqs.push_back({id, wav(id + ".wav"), PromptConfig::with_tokens({AsrLang::ca}), "m"});
    }
    const AsrClient client(mock.url(), fast());
    const auto out = client.transcribe_batch(reqs, 3);
    ASSERT_EQ(out.size(), 24u);
    for (int i = 0; i < 24; ++i) EXPECT_EQ(out[i], "text " + std::to_string(i));
    EXPECT_LE(mock.max_concurrent(), 3);
    EXPECT_GE(mock.max_concurrent(), 2);
}

TEST_F(ClientsTest, BatchSurfacesFirstFailure) {
    mock.set_transcript("a", "x");
    const AsrClient client(mock.url(), fast());
    const std::vector<AsrRequest> reqs{{"a", wav("a.wav"), {}, "m"}, {"missing", wav("b.wav"), {}, "m"}};
    EXPECT_THROW(client.transcribe_batch(reqs), ServiceError);
}

TEST_F(ClientsTest, MissingAudioIsIoError) {
    const AsrClient client(mock.url(), fast());
    EXPECT_THROW(client.transcribe({"u", dir / "nope.wav", {}, "m"}), IoError);
}

TEST_F(ClientsTest, SynthesizeReturnsDecodedAudio) {
    const TtsClient client(mock.url(), fast());
    const auto audio =
        client.synthesize({"r1", {{SegmentLang::cat, "Avui"}, {SegmentLang::esp, "el presupuesto"}}, "voice-3"});
    EXPECT_EQ(audio.sample_rate, 22050);
    EXPECT_EQ(audio.samples.size(), 2u * 1103u);
    const auto calls = mock.tts_calls();
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0]["voice_id"], "voice-3");
    EXPECT_EQ(calls[0]["segments"][1]["lang"], "esp");
    EXPECT_THROW(client.synthesize({"r2", {}, "v"}), InvalidArgument);
}

TEST_F(ClientsTest, HttpTranslatorUsesService) {
    mock.set_translator(std::make_shared<DictionaryTranslator>(
        DictionaryTranslator::load(csforge::testing::fixture("dict_ca_es.tsv"))));
    const HttpTranslator mt(mock.url(), fast());
    EXPECT_EQ(mt.translate("el nou pressupost"), "el nuevo presupuesto");
    const auto calls = mock.mt_calls();
    ASSERT_EQ(calls.size(), 1u);
    EXPECT_EQ(calls[0]["src"], "ca");
    EXPECT_EQ(calls[0]["dst"], "es");
    EXPECT_EQ(calls[0]["request_id"], content_request_id("mt", "el nou pressupost"));
    EXPECT_THROW(mt.translate(""), InvalidArgument);
}
