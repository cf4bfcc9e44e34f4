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

#include "csforge/review.hpp"

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <mutex>

#include <fcntl.h>
#include <unistd.h>

#include <httplib.h>

#include "csforge/audio.hpp"
#include "csforge/log.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

json to_json(const DecisionLogEntry& e) {
    return {{"candidate_id", e.candidate_id},
            {"decision", to_string(e.decision)},
            {"annotator", e.annotator},
            {"timestamp", e.timestamp},
            {"max_run_es", e.max_run_es}};
}

DecisionLogEntry decision_entry_from_json(const json& j) {
    DecisionLogEntry e;
    try {
        e.candidate_id = j.at("candidate_id").get<std::string>();
        e.decision = parse_decision(j.at("decision").get<std::string>());
        e.annotator = j.at("annotator").get<std::string>();
        e.timestamp = j.at("timestamp").get<std::string>();
        e.max_run_es = j.at("max_run_es").get<std::size_t>();
    } catch (const json::exception& ex) {
        throw ParseError(std::string("bad decision entry: ") + ex.what());
    }
    return e;
}

std::vector<CsCandidate> replay(std::vector<CsCandidate> initial, std::span<const DecisionLogEntry> log) {
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < initial.size(); ++i) index.emplace(initial[i].id(), i);
    for (std::size_t k = 0; k < log.size(); ++k) {
        const auto& e = log[k];
        const auto it = index.find(e.candidate_id);
        if (it == index.end()) {
            throw CorruptLogError("log entry " + std::to_string(k + 1) + " names unknown candidate " + e.candidate_id,
                                  k + 1);
        }
        auto& c = initial[it->second];
        if (c.max_run_es != e.max_run_es) {
            throw CorruptLogError("log entry " + std::to_string(k + 1) + " recorded max_run_es " +
                                      std::to_string(e.max_run_es) + " but candidate " + c.id() + " has " +
                                      std::to_string(c.max_run_es),
                                  k + 1);
        }
        try {
            c = decide(c, e.decision, e.annotator, e.timestamp);
        } catch (const Error& ex) {
            throw CorruptLogError("log entry " + std::to_string(k + 1) + ": " + ex.what(), k + 1);
        }
    }
    return initial;
}

Manifest export_accepted(std::span<const CsCandidate> candidates) {
    Manifest m;
    m.source_name = "accepted";
    for (const auto& c : candidates) {
        if (c.status == CandidateStatus::accepted) m.entries.push_back(c.utterance);
    }
    return m;
}

json ReviewStats::to_json() const {
    return {{"total", total},
            {"by_status", {{"pending", pending}, {"accepted", accepted}, {"rejected", rejected}}},
            {"by_method", {{"keyword", keyword}, {"token_count", token_count}}}};
}

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

namespace {

std::vector<DecisionLogEntry> read_log(const std::filesystem::path& path) {
    std::vector<DecisionLogEntry> out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(decision_entry_from_json(json::parse(line)));
        } catch (const std::exception& e) {
            throw CorruptLogError(path.string() + " line " + std::to_string(line_no) + ": " + e.what(), line_no);
        }
    }
    return out;
}

void append_line(const std::filesystem::path& path, const std::string& line) {
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd < 0) throw IoError("cannot open " + path.string() + ": " + std::strerror(errno));
    const std::string data = line + "\n";
    std::size_t written = 0;
    while (written < data.size()) {
        const auto n = ::write(fd, data.data() + written, data.size() - written);
        if (n < 0) {
            if (errno == EINTR) continue;
            const int err = errno;
            ::close(fd);
            throw IoError("cannot write " + path.string() + ": " + std::strerror(err));
        }
        written += static_cast<std::size_t>(n);
    }
    ::fsync(fd);
    ::close(fd);
}

} // namespace

ReviewStore::ReviewStore(const std::filesystem::path& snapshot, std::filesystem::path log_path, Clock clock)
    : log_path_(std::move(log_path)), clock_(std::move(clock)) {
    auto initial = load_candidates(snapshot);
    log_ = read_log(log_path_);
    try {
        candidates_ = replay(std::move(initial), log_);
    } catch (const CorruptLogError& e) {
        throw CorruptLogError(std::string(e.what()) + ". The log at " + log_path_.string() +
                                  " does not match the snapshot; keep a copy, then truncate it to the first " +
                                  std::to_string(e.line() - 1) + " entries or restore the snapshot it was written for",
                              e.line());
    }
    for (std::size_t i = 0; i < candidates_.size(); ++i) index_.emplace(candidates_[i].id(), i);
}

std::size_t ReviewStore::index_of(std::string_view id) const {
    const auto it = index_.find(std::string(id));
    if (it == index_.end()) throw NotFound("no candidate with id \"" + std::string(id) + "\"");
    return it->second;
}

CsCandidate ReviewStore::apply(std::string_view id, Decision decision, std::string_view annotator) {
    std::unique_lock lock(mutex_);
    const auto i = index_of(id);
    const auto updated = decide(candidates_[i], decision, annotator, clock_());
    const DecisionLogEntry entry{updated.id(), decision, std::string(annotator), *updated.decided_at,
                                 updated.max_run_es};
    append_line(log_path_, to_json(entry).dump());
    log_.push_back(entry);
    candidates_[i] = updated;
    return updated;
}

std::vector<CsCandidate> ReviewStore::list(std::optional<CandidateStatus> status) const {
    std::shared_lock lock(mutex_);
    if (!status) return candidates_;
    std::vector<CsCandidate> out;
    std::copy_if(candidates_.begin(), candidates_.end(), std::back_inserter(out),
                 [&](const CsCandidate& c) { return c.status == *status; });
    return out;
}

CsCandidate ReviewStore::get(std::string_view id) const {
    std::shared_lock lock(mutex_);
    return candidates_[index_of(id)];
}

ReviewStats ReviewStore::stats() const {
    std::shared_lock lock(mutex_);
    ReviewStats s;
    for (const auto& c : candidates_) {
        ++s.total;
        switch (c.status) {
        case CandidateStatus::pending: ++s.pending; break;
        case CandidateStatus::accepted: ++s.accepted; break;
        case CandidateStatus::rejected: ++s.rejected; break;
        }
        (c.method == DetectionMethod::keyword ? s.keyword : s.token_count)++;
    }
    return s;
}

std::vector<DecisionLogEntry> ReviewStore::log() const {
    std::shared_lock lock(mutex_);
    return log_;
}

Manifest ReviewStore::export_accepted() const {
    std::shared_lock lock(mutex_);
    return csforge::export_accepted(candidates_);
}

int review_port_from_env() {
    const char* v = std::getenv("CS_FORGE_PORT");
    if (!v || !*v) return kDefaultReviewPort;
    char* end = nullptr;
    const long p = std::strtol(v, &end, 10);
    if (*end != '\0' || p < 1 || p > 65535) {
        log::warning(std::string("ignoring invalid CS_FORGE_PORT=") + v);
        return kDefaultReviewPort;
    }
    return static_cast<int>(p);
}

struct ReviewServer::Impl {
    ReviewStore& store;
    ReviewServerOptions options;
    httplib::Server server;
    std::mutex lifecycle;
    bool listening = false;
    bool stopped = false;

    Impl(ReviewStore& s, ReviewServerOptions o) : store(s), options(std::move(o)) {
        // httplib defaults to SO_REUSEPORT, which would let a second server
        // share a port that is already serving.
        server.set_socket_options([](socket_t sock) {
            int yes = 1;
            ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
        });
    }
};

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, std::string_view kind, const std::string& message,
                json extra = json::object()) {
    extra["error"] = kind;
    extra["message"] = message;
    send_json(res, status, extra);
}

// Resolves a manifest audio path under root; nullopt if it escapes the root.
std::optional<std::filesystem::path> resolve_audio(const std::filesystem::path& root, const std::string& rel) {
    namespace fs = std::filesystem;
    const fs::path p(rel);
    if (p.is_absolute()) return std::nullopt;
    std::error_code ec;
    const auto base = fs::weakly_canonical(root, ec);
    if (ec) return std::nullopt;
    const auto full = fs::weakly_canonical(base / p, ec);
    if (ec) return std::nullopt;
    const auto mismatch = std::mismatch(base.begin(), base.end(), full.begin(), full.end());
    if (mismatch.first != base.end()) return std::nullopt;
    return full;
}

} // namespace

ReviewServer::ReviewServer(ReviewStore& store, ReviewServerOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {
    auto& svr = impl_->server;
    auto* self = impl_.get();

    svr.Get("/api/candidates", [self](const httplib::Request& req, httplib::Response& res) {
        std::optional<CandidateStatus> status;
        if (req.has_param("status")) {
            try {
                status = parse_candidate_status(req.get_param_value("status"));
            } catch (const Error& e) {
                return send_error(res, 400, "bad_request", e.what());
            }
        }
        json out = json::array();
        for (const auto& c : self->store.list(status)) out.push_back(to_json(c));
        send_json(res, 200, out);
    });

    svr.Get(R"(/api/candidates/([^/]+))", [self](const httplib::Request& req, httplib::Response& res) {
        try {
            send_json(res, 200, to_json(self->store.get(req.matches[1].str())));
        } catch (const NotFound& e) {
            send_error(res, 404, "not_found", e.what());
        }
    });

    svr.Post(R"(/api/candidates/([^/]+)/decision)", [self](const httplib::Request& req, httplib::Response& res) {
        const std::string id = req.matches[1].str();
        Decision decision;
        std::string annotator;
        try {
            const auto body = json::parse(req.body);
            decision = parse_decision(body.at("decision").get<std::string>());
            annotator = body.at("annotator").get<std::string>();
        } catch (const std::exception& e) {
            return send_error(res, 400, "bad_request",
                              std::string("expected {\"decision\": \"accept\"|\"reject\", \"annotator\": str}: ") +
                                  e.what());
        }
        try {
            send_json(res, 200, to_json(self->store.apply(id, decision, annotator)));
        } catch (const NotFound& e) {
            send_error(res, 404, "not_found", e.what());
        } catch (const AlreadyDecided& e) {
            send_error(res, 409, "already_decided", e.what());
        } catch (const RuleViolation& e) {
            std::size_t run = 0;
            try {
                run = self->store.get(id).max_run_es;
            } catch (const Error&) {
            }
            send_error(res, 422, "rule_violation", e.what(),
                       {{"max_run_es", run}, {"required_run_es", kMinSpanishRun}});
        } catch (const InvalidArgument& e) {
            send_error(res, 400, "bad_request", e.what());
        } catch (const Error& e) {
            send_error(res, 500, "internal", e.what());
        }
    });

    svr.Get(R"(/api/audio/([^/]+))", [self](const httplib::Request& req, httplib::Response& res) {
        CsCandidate c;
        try {
            c = self->store.get(req.matches[1].str());
        } catch (const NotFound& e) {
            return send_error(res, 404, "not_found", e.what());
        }
        if (!c.utterance.audio_path) return send_error(res, 404, "not_found", "candidate has no audio_path");
        const auto path = resolve_audio(self->options.audio_root, *c.utterance.audio_path);
        if (!path) return send_error(res, 403, "forbidden", "audio path escapes the audio root");
        try {
            const auto bytes = read_file_bytes(*path);
            // httplib slices the body for Range requests and answers 206.
            res.set_content(std::string(bytes.begin(), bytes.end()), "audio/wav");
        } catch (const IoError& e) {
            send_error(res, 404, "not_found", e.what());
        }
    });

    svr.Get("/api/stats", [self](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, self->store.stats().to_json());
    });

    if (impl_->options.ui_dir) {
        if (!svr.set_mount_point("/", impl_->options.ui_dir->string())) {
            throw IoError("UI directory " + impl_->options.ui_dir->string() + " does not exist");
        }
    }
}

ReviewServer::~ReviewServer() { stop(); }

int ReviewServer::bind(const std::string& host, int port) {
    auto& svr = impl_->server;
    if (port == 0) {
        const int p = svr.bind_to_any_port(host);
        if (p < 0) throw IoError("cannot bind " + host);
        return p;
    }
    if (!svr.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port) + " (port in use?)");
    return port;
}

void ReviewServer::listen() {
    {
        std::lock_guard lock(impl_->lifecycle);
        if (impl_->stopped) return;
        impl_->listening = true;
    }
    impl_->server.listen_after_bind();
}

// httplib ignores stop() until its accept loop is running, so a stop that
// races a starting listen() waits for the loop first.
void ReviewServer::stop() {
    if (!impl_) return;
    {
        std::lock_guard lock(impl_->lifecycle);
        impl_->stopped = true;
        if (!impl_->listening) return;
    }
    impl_->server.wait_until_ready();
    impl_->server.stop();
}

} // namespace csforge
