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

#include "csforge/clients.hpp"

#include <atomic>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "csforge/error.hpp"
#include "csforge/random.hpp"

namespace csforge {

using nlohmann::json;

Endpoint Endpoint::parse(std::string_view url) {
    constexpr std::string_view scheme = "http://";
    if (url.substr(0, scheme.size()) != scheme) {
        throw InvalidArgument("endpoint must be an http:// URL, got \"" + std::string(url) + "\"");
    }
    const auto rest = url.substr(scheme.size());
    const auto slash = rest.find('/');
    Endpoint ep;
    ep.scheme_host_port = std::string(url.substr(0, scheme.size() + std::min(slash, rest.size())));
    if (slash != std::string_view::npos) {
        ep.base_path = std::string(rest.substr(slash));
        while (!ep.base_path.empty() && ep.base_path.back() == '/') ep.base_path.pop_back();
    }
    if (ep.scheme_host_port.size() == scheme.size()) throw InvalidArgument("endpoint has no host");
    return ep;
}

std::string content_request_id(std::string_view prefix, std::string_view payload) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(payload)));
    return std::string(prefix) + "-" + buf;
}

namespace {

struct Reply {
    int status = 0;
    std::string body;
};

bool retryable(int status) { return status == 429 || status >= 500; }

// Runs `send` up to policy.max_attempts times.
Reply post_with_retry(const Endpoint& ep, const RetryPolicy& policy,
                      const std::function<httplib::Result(httplib::Client&)>& send) {
    auto backoff = policy.initial_backoff;
    std::string last_error;
    std::optional<Reply> last_reply;
    const int attempts = std::max(1, policy.max_attempts);
    for (int attempt = 1; attempt <= attempts; ++attempt) {
        httplib::Client client(ep.scheme_host_port);
        client.set_connection_timeout(policy.connect_timeout);
        client.set_read_timeout(policy.read_timeout);
        client.set_keep_alive(false);
        auto res = send(client);
        if (res) {
            Reply r{res->status, res->body};
            if (r.status >= 200 && r.status < 300) return r;
            if (!retryable(r.status)) throw ServiceError(r.status, r.body);
            last_reply = std::move(r);
        } else {
            last_error = httplib::to_string(res.error());
            last_reply.reset();
        }
        if (attempt < attempts) {
            std::this_thread::sleep_for(backoff);
            backoff = std::chrono::milliseconds(
                static_cast<long long>(static_cast<double>(backoff.count()) * policy.backoff_multiplier));
        }
    }
    if (last_reply) throw ServiceError(last_reply->status, last_reply->body);
    throw NetworkError("request to " + ep.scheme_host_port + " failed: " + last_error, attempts);
}

json parse_reply(const Reply& r, const char* what) {
    try {
        return json::parse(r.body);
    } catch (const json::exception&) {
        throw ServiceError(r.status, std::string("malformed ") + what + " response: " + r.body);
    }
}

} // namespace

AsrClient::AsrClient(std::string_view url, RetryPolicy retry) : endpoint_(Endpoint::parse(url)), retry_(retry) {}

std::string AsrClient::transcribe(const AsrRequest& r) const {
    const auto audio = read_file_bytes(r.audio_path);
    const auto tokens = build_prompt(r.prompt);
    std::string prompt;
    for (const auto& t : tokens) prompt += t;
    const httplib::MultipartFormDataItems items{
        {"request_id", r.request_id, "", ""},
        {"model_id", r.model_id, "", ""},
        {"prompt", prompt, "", ""},
        {"prompt_tokens", json(tokens).dump(), "", "application/json"},
        {"audio", std::string(audio.begin(), audio.end()), r.audio_path.filename().string(), "audio/wav"},
    };
    const auto path = endpoint_.path("/v1/transcribe");
    const auto reply =
        post_with_retry(endpoint_, retry_, [&](httplib::Client& c) { return c.Post(path, items); });
    const auto j = parse_reply(reply, "transcription");
    if (j.value("request_id", r.request_id) != r.request_id) {
        throw ServiceError(reply.status, "response request_id does not match " + r.request_id);
    }
    if (!j.contains("text") || !j["text"].is_string()) throw ServiceError(reply.status, "response has no text field");
    return j["text"].get<std::string>();
}

std::vector<std::string> AsrClient::transcribe_batch(std::span<const AsrRequest> requests,
                                                     std::size_t max_in_flight) const {
    std::vector<std::string> results(requests.size());
    std::vector<std::exception_ptr> errors(requests.size());
    std::atomic<std::size_t> next{0};
    const std::size_t workers = std::min(std::max<std::size_t>(1, max_in_flight), requests.size());
    {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < requests.size(); i = next++) {
                    try {
                        results[i] = transcribe(requests[i]);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

TtsClient::TtsClient(std::string_view url, RetryPolicy retry) : endpoint_(Endpoint::parse(url)), retry_(retry) {}

AudioBuffer TtsClient::synthesize(const TtsRequest& r) const {
    if (r.segments.empty()) throw InvalidArgument("TTS request needs at least one segment");
    json segments = json::array();
    for (const auto& s : r.segments) segments.push_back({{"lang", to_string(s.lang)}, {"text", s.text}});
    const json body{{"request_id", r.request_id}, {"voice_id", r.voice_id}, {"segments", segments}};
    const auto payload = body.dump();
    const auto path = endpoint_.path("/v1/synthesize");
    const auto reply = post_with_retry(endpoint_, retry_,
                                       [&](httplib::Client& c) { return c.Post(path, payload, "application/json"); });
    const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(reply.body.data()),
                                              reply.body.size());
    return decode_wav(bytes);
}

HttpTranslator::HttpTranslator(std::string_view url, RetryPolicy retry)
    : endpoint_(Endpoint::parse(url)), retry_(retry) {}

std::string HttpTranslator::translate(std::string_view text) const {
    if (text.empty()) throw InvalidArgument("cannot translate empty text");
    const json body{{"request_id", content_request_id("mt", text)}, {"src", "ca"}, {"dst", "es"}, {"text", text}};
    const auto payload = body.dump();
    const auto path = endpoint_.path("/v1/translate");
    const auto reply = post_with_retry(endpoint_, retry_,
                                       [&](httplib::Client& c) { return c.Post(path, payload, "application/json"); });
    const auto j = parse_reply(reply, "translation");
    if (!j.contains("translation") || !j["translation"].is_string()) {
        throw ServiceError(reply.status, "response has no translation field");
    }
    return j["translation"].get<std::string>();
}

} // namespace csforge
