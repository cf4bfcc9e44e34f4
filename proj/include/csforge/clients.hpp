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

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "csforge/audio.hpp"
#include "csforge/prompt.hpp"
#include "csforge/textgen.hpp"
#include "csforge/translate.hpp"

namespace csforge {

// http://host[:port][/prefix]. Only plain HTTP is supported.
struct Endpoint {
    std::string scheme_host_port;
    std::string base_path;

    static Endpoint parse(std::string_view url);
    std::string path(std::string_view route) const { return base_path + std::string(route); }
};

// Transport errors, 429 and 5xx are retried with exponential backoff; any
// other non-2xx status fails immediately with the body preserved.
struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds initial_backoff{200};
    double backoff_multiplier = 2.0;
    std::chrono::milliseconds connect_timeout{5000};
    std::chrono::milliseconds read_timeout{60000};
};

inline constexpr std::size_t kDefaultMaxInFlight = 4;

struct AsrRequest {
    std::string request_id;
    std::filesystem::path audio_path;
    PromptConfig prompt;
    std::string model_id;
};

class AsrClient {
public:
    explicit AsrClient(std::string_view url, RetryPolicy retry = {});

    // POST /v1/transcribe (multipart). Returns the hypothesis text verbatim.
    std::string transcribe(const AsrRequest& r) const;

    // Results are in request order regardless of completion order.
    std::vector<std::string> transcribe_batch(std::span<const AsrRequest> requests,
                                              std::size_t max_in_flight = kDefaultMaxInFlight) const;

private:
    Endpoint endpoint_;
    RetryPolicy retry_;
};

struct TtsRequest {
    std::string request_id;
    std::vector<Segment> segments;
    std::string voice_id;
};

class TtsClient {
public:
    explicit TtsClient(std::string_view url, RetryPolicy retry = {});

    // POST /v1/synthesize (JSON). The response body is a WAV file.
    AudioBuffer synthesize(const TtsRequest& r) const;

private:
    Endpoint endpoint_;
    RetryPolicy retry_;
};

// MT service backed translator: POST /v1/translate.
class HttpTranslator : public Translator {
public:
    explicit HttpTranslator(std::string_view url, RetryPolicy retry = {});

    std::string translate(std::string_view text) const override;

private:
    Endpoint endpoint_;
    RetryPolicy retry_;
};

// Request id derived from the payload, so a retried or repeated call carries
// the same id.
std::string content_request_id(std::string_view prefix, std::string_view payload);

} // namespace csforge
