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
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "csforge/corpus.hpp"
#include "csforge/detect.hpp"
#include "csforge/error.hpp"

namespace csforge {

// One manual verdict. max_run_es is the rule input as seen when the decision
// was made; replay checks it against the candidate.
struct DecisionLogEntry {
    std::string candidate_id;
    Decision decision = Decision::reject;
    std::string annotator;
    std::string timestamp;
    std::size_t max_run_es = 0;

    bool operator==(const DecisionLogEntry&) const = default;
};

nlohmann::json to_json(const DecisionLogEntry& e);
DecisionLogEntry decision_entry_from_json(const nlohmann::json& j);

// The decision log on disk cannot be replayed over the snapshot.
class CorruptLogError : public Error {
public:
    CorruptLogError(const std::string& what, std::size_t line)
        : Error(what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Applies the log in order with the same rules the server enforces. Throws
// CorruptLogError naming the 1-based entry that fails.
std::vector<CsCandidate> replay(std::vector<CsCandidate> initial, std::span<const DecisionLogEntry> log);

// Accepted candidates as manifest entries, in candidate order.
Manifest export_accepted(std::span<const CsCandidate> candidates);

struct ReviewStats {
    std::size_t total = 0;
    std::size_t pending = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    std::size_t keyword = 0;
    std::size_t token_count = 0;

    nlohmann::json to_json() const;
};

std::string utc_timestamp();

// Immutable candidate snapshot plus an append-only decision log next to it.
// Writers are serialized; readers see whole candidates.
class ReviewStore {
public:
    using Clock = std::function<std::string()>;

    // Loads the snapshot and replays `log_path` if it exists. A log that does
    // not replay cleanly raises CorruptLogError and nothing is served.
    ReviewStore(const std::filesystem::path& snapshot, std::filesystem::path log_path, Clock clock = utc_timestamp);

    // Validates with decide(), appends to the log and flushes before the
    // in-memory state changes. Returns the updated candidate.
    CsCandidate apply(std::string_view id, Decision decision, std::string_view annotator);

    std::vector<CsCandidate> list(std::optional<CandidateStatus> status = std::nullopt) const;
    CsCandidate get(std::string_view id) const;
    ReviewStats stats() const;
    std::vector<DecisionLogEntry> log() const;
    Manifest export_accepted() const;

    const std::filesystem::path& log_path() const { return log_path_; }

private:
    std::size_t index_of(std::string_view id) const;

    std::filesystem::path log_path_;
    Clock clock_;
    mutable std::shared_mutex mutex_;
    std::vector<CsCandidate> candidates_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<DecisionLogEntry> log_;
};

inline constexpr int kDefaultReviewPort = 8787;

// CS_FORGE_PORT when set and valid, otherwise kDefaultReviewPort.
int review_port_from_env();

struct ReviewServerOptions {
    std::filesystem::path audio_root;
    std::optional<std::filesystem::path> ui_dir;
};

// HTTP front of a ReviewStore. Routes live under /api/.
class ReviewServer {
public:
    ReviewServer(ReviewStore& store, ReviewServerOptions options);
    ~ReviewServer();
    ReviewServer(const ReviewServer&) = delete;
    ReviewServer& operator=(const ReviewServer&) = delete;

    // Port 0 picks a free port. Throws IoError when the port is taken.
    int bind(const std::string& host, int port);
    // Blocks until stop().
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace csforge
