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

#include "mock_services.hpp"

#include <chrono>

#include <httplib.h>

#include "csforge/audio.hpp"
#include "test_support.hpp"

namespace csforge::testing {

using nlohmann::json;

namespace {

struct InFlight {
    std::atomic<int>& n;
    InFlight(std::atomic<int>& counter, std::atomic<int>& peak) : n(counter) {
        const int now = ++n;
        int prev = peak.load();
        while (now > prev && !peak.compare_exchange_weak(prev, now)) {
        }
    }
    ~InFlight() { --n; }
};

} // namespace

MockServices::MockServices() : server_(std::make_unique<httplib::Server>()) {
    auto& svr = *server_;

    svr.Post("/v1/transcribe", [this](const httplib::Request& req, httplib::Response& res) {
        InFlight guard(in_flight_, max_concurrent_);
        ++total_;
        int status = 0;
        if (maybe_fail(status)) {
            res.status = status;
            res.set_content("{\"error\":\"injected\"}", "application/json");
            return;
        }
        if (!req.has_file("request_id") || !req.has_file("audio")) {
            res.status = 400;
            res.set_content("{\"error\":\"missing field\"}", "application/json");
            return;
        }
        AsrCall call;
        call.request_id = req.get_file_value("request_id").content;
        call.model_id = req.has_file("model_id") ? req.get_file_value("model_id").content : "";
        call.prompt = req.has_file("prompt") ? req.get_file_value("prompt").content : "";
        if (req.has_file("prompt_tokens")) call.prompt_tokens = json::parse(req.get_file_value("prompt_tokens").content);
        call.audio_bytes = req.get_file_value("audio").content.size();
        // Small delay so concurrent requests actually overlap.
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
        std::string text;
        {
            std::lock_guard lock(mutex_);
            asr_calls_.push_back(call);
            const auto it = transcripts_.find(call.request_id);
            if (it == transcripts_.end()) {
                res.status = 404;
                res.set_content("{\"error\":\"no canned transcript for " + call.request_id + "\"}", "application/json");
                return;
            }
            text = it->second;
        }
        res.set_content(json{{"request_id", call.request_id}, {"text", text}}.dump(), "application/json");
    });

    svr.Post("/v1/synthesize", [this](const httplib::Request& req, httplib::Response& res) {
        InFlight guard(in_flight_, max_concurrent_);
        ++total_;
        int status = 0;
        if (maybe_fail(status)) {
            res.status = status;
            return;
        }
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception&) {
            res.status = 400;
            return;
        }
        {
            std::lock_guard lock(mutex_);
            tts_calls_.push_back(body);
        }
        // 50 ms of tone per segment, pitch by language.
        AudioBuffer out;
        out.sample_rate = tts_rate_;
        for (const auto& seg : body.at("segments")) {
            const auto tone = sine(seg.at("lang") == "cat" ? 330.0 : 440.0, 0.05, 0.25, tts_rate_);
            out.samples.insert(out.samples.end(), tone.samples.begin(), tone.samples.end());
        }
        const auto bytes = encode_wav(out);
        res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
    });

    svr.Post("/v1/translate", [this](const httplib::Request& req, httplib::Response& res) {
        InFlight guard(in_flight_, max_concurrent_);
        ++total_;
        int status = 0;
        if (maybe_fail(status)) {
            res.status = status;
            return;
        }
        json body;
        try {
            body = json::parse(req.body);
        } catch (const json::exception&) {
            res.status = 400;
            return;
        }
        std::shared_ptr<const Translator> t;
        {
            std::lock_guard lock(mutex_);
            mt_calls_.push_back(body);
            t = translator_;
        }
        const auto src = body.at("text").get<std::string>();
        const auto translation = t ? t->translate(src) : "[es] " + src;
        res.set_content(json{{"request_id", body.value("request_id", "")}, {"translation", translation}}.dump(),
                        "application/json");
    });

    port_ = svr.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
}

MockServices::~MockServices() {
    server_->stop();
    if (thread_.joinable()) thread_.join();
}

void MockServices::set_transcript(const std::string& request_id, const std::string& text) {
    std::lock_guard lock(mutex_);
    transcripts_[request_id] = text;
}

void MockServices::set_translator(std::shared_ptr<const Translator> t) {
    std::lock_guard lock(mutex_);
    translator_ = std::move(t);
}

void MockServices::fail_next(int count, int status) {
    std::lock_guard lock(mutex_);
    fail_remaining_ = count;
    fail_status_ = status;
}

bool MockServices::maybe_fail(int& status) {
    std::lock_guard lock(mutex_);
    if (fail_remaining_ <= 0) return false;
    --fail_remaining_;
    status = fail_status_;
    return true;
}

std::vector<MockServices::AsrCall> MockServices::asr_calls() const {
    std::lock_guard lock(mutex_);
    return asr_calls_;
}

std::vector<json> MockServices::tts_calls() const {
    std::lock_guard lock(mutex_);
    return tts_calls_;
}

std::vector<json> MockServices::mt_calls() const {
    std::lock_guard lock(mutex_);
    return mt_calls_;
}

} // namespace csforge::testing
