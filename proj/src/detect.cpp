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

#include "csforge/detect.hpp"

#include <algorithm>
#include <fstream>

#include "csforge/error.hpp"
#include "csforge/log.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

std::string_view to_string(DetectionMethod m) {
    return m == DetectionMethod::keyword ? "keyword" : "token_count";
}

std::string_view to_string(CandidateStatus s) {
    switch (s) {
    case CandidateStatus::pending: return "pending";
    case CandidateStatus::accepted: return "accepted";
    case CandidateStatus::rejected: return "rejected";
    }
    return "pending";
}

std::string_view to_string(Decision d) { return d == Decision::accept ? "accept" : "reject"; }

DetectionMethod parse_detection_method(std::string_view s) {
    if (s == "keyword") return DetectionMethod::keyword;
    if (s == "token_count") return DetectionMethod::token_count;
    throw ParseError("invalid detection method \"" + std::string(s) + "\"");
}

CandidateStatus parse_candidate_status(std::string_view s) {
    if (s == "pending") return CandidateStatus::pending;
    if (s == "accepted") return CandidateStatus::accepted;
    if (s == "rejected") return CandidateStatus::rejected;
    throw ParseError("invalid status \"" + std::string(s) + "\"");
}

Decision parse_decision(std::string_view s) {
    if (s == "accept") return Decision::accept;
    if (s == "reject") return Decision::reject;
    throw ParseError("invalid decision \"" + std::string(s) + "\"");
}

KeywordSet::KeywordSet(std::vector<std::string> keywords) {
    for (auto& k : keywords) {
        auto w = text::normalize_word(text::trim(k));
        if (!w.empty()) words_.insert(std::move(w));
    }
    if (words_.empty()) throw InvalidArgument("keyword set must not be empty");
}

KeywordSet KeywordSet::defaults() { return KeywordSet({"y"}); }

KeywordSet KeywordSet::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open keyword file " + path.string());
    std::vector<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto w = text::trim(line);
        if (w.empty() || w.front() == '#') continue;
        words.push_back(std::move(w));
    }
    return KeywordSet(std::move(words));
}

std::size_t max_consecutive_run(std::span<const TaggedToken> tokens, TokenLang lang) {
    std::size_t best = 0;
    std::size_t run = 0;
    for (const auto& t : tokens) {
        run = t.lang == lang ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

bool is_code_switched(const LangCounts& counts, std::size_t min_each) {
    if (min_each < 1) throw InvalidArgument("min_each must be >= 1");
    return counts.ca >= min_each && counts.es >= min_each;
}

namespace {

CsCandidate make_candidate(const Utterance& u, TaggedUtterance tagged, DetectionMethod method) {
    CsCandidate c;
    c.utterance = u;
    c.max_run_es = max_consecutive_run(tagged.tokens, TokenLang::es);
    c.max_run_ca = max_consecutive_run(tagged.tokens, TokenLang::ca);
    c.tokens = std::move(tagged.tokens);
    c.counts = tagged.counts;
    c.method = method;
    return c;
}

void warn_if_long(const Utterance& u) {
    if (u.duration_s && *u.duration_s > kLongUtteranceS) {
        log::warning("utterance " + u.id + " is " + std::to_string(*u.duration_s) +
                     " s long; detection rules assume short segments");
    }
}

} // namespace

std::optional<CsCandidate> keyword_candidate(const Utterance& u, const KeywordSet& keywords,
                                             const LangLexicon& lex, double threshold) {
    if (u.text.empty()) return std::nullopt;
    auto tagged = tag_utterance(u.text, lex, threshold);
    std::vector<KeywordMatch> matches;
    for (const auto& t : tagged.tokens) {
        const auto w = text::normalize_word(t.text);
        if (keywords.contains(w)) matches.push_back({w, t.span});
    }
    if (matches.empty()) return std::nullopt;
    auto c = make_candidate(u, std::move(tagged), DetectionMethod::keyword);
    c.matched_keywords = std::move(matches);
    return c;
}

std::optional<CsCandidate> token_count_candidate(const Utterance& u, const LangLexicon& lex, double threshold,
                                                 std::size_t min_each) {
    auto tagged = tag_utterance(u.text, lex, threshold);
    if (!is_code_switched(tagged.counts, min_each)) return std::nullopt;
    auto c = make_candidate(u, std::move(tagged), DetectionMethod::token_count);
    c.status = CandidateStatus::accepted;
    c.decided_by = "auto:token_count";
    return c;
}

std::vector<CsCandidate> scan_corpus(const Manifest& m, DetectionMethod method, const LangLexicon& lex,
                                     const KeywordSet& keywords, const ScanOptions& opts) {
    std::vector<CsCandidate> out;
    for (const auto& u : m.entries) {
        warn_if_long(u);
        auto c = method == DetectionMethod::keyword ? keyword_candidate(u, keywords, lex, opts.threshold)
                                                    : token_count_candidate(u, lex, opts.threshold, opts.min_each);
        if (c) out.push_back(std::move(*c));
    }
    return out;
}

CsCandidate decide(const CsCandidate& c, Decision decision, std::string_view annotator,
                   std::string_view timestamp) {
    if (c.status != CandidateStatus::pending) {
        throw AlreadyDecided("candidate " + c.id() + " is already " + std::string(to_string(c.status)));
    }
    if (annotator.empty()) throw InvalidArgument("annotator must not be empty");
    if (decision == Decision::accept && c.max_run_es < kMinSpanishRun) {
        throw RuleViolation("candidate " + c.id() + " has a longest Spanish run of " +
                            std::to_string(c.max_run_es) + " tokens; accepting requires at least " +
                            std::to_string(kMinSpanishRun));
    }
    CsCandidate out = c;
    out.status = decision == Decision::accept ? CandidateStatus::accepted : CandidateStatus::rejected;
    out.decided_by = std::string(annotator);
    out.decided_at = std::string(timestamp);
    return out;
}

namespace {

constexpr const char* kCandidateKeys[] = {"status",   "method", "max_run_es", "max_run_ca", "counts", "tokens",
                                          "matched_keywords", "decided_by", "decided_at"};

json span_json(const Span& s) { return json::array({s.begin, s.end}); }

Span span_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ParseError("span must be [begin, end]");
    Span s{j[0].get<std::size_t>(), j[1].get<std::size_t>()};
    if (s.begin >= s.end) throw ParseError("span must satisfy begin < end");
    return s;
}

} // namespace

json to_json(const CsCandidate& c) {
    json j = to_json(c.utterance);
    j["status"] = to_string(c.status);
    j["method"] = to_string(c.method);
    j["max_run_es"] = c.max_run_es;
    j["max_run_ca"] = c.max_run_ca;
    j["counts"] = {{"ca", c.counts.ca}, {"es", c.counts.es}, {"unk", c.counts.unk}};
    json tokens = json::array();
    for (const auto& t : c.tokens) {
        tokens.push_back({{"text", t.text}, {"lang", to_string(t.lang)}, {"span", span_json(t.span)}});
    }
    j["tokens"] = std::move(tokens);
    json kws = json::array();
    for (const auto& k : c.matched_keywords) kws.push_back({{"keyword", k.keyword}, {"span", span_json(k.span)}});
    j["matched_keywords"] = std::move(kws);
    if (c.decided_by) j["decided_by"] = *c.decided_by;
    if (c.decided_at) j["decided_at"] = *c.decided_at;
    return j;
}

CsCandidate candidate_from_json(const json& j) {
    CsCandidate c;
    c.utterance = utterance_from_json(j);
    for (const char* key : kCandidateKeys) c.utterance.extra.erase(key);
    try {
        c.status = parse_candidate_status(j.at("status").get<std::string>());
        c.method = parse_detection_method(j.at("method").get<std::string>());
        const auto& counts = j.at("counts");
        c.counts = {counts.at("ca").get<std::size_t>(), counts.at("es").get<std::size_t>(),
                    counts.at("unk").get<std::size_t>()};
        for (const auto& t : j.value("tokens", json::array())) {
            c.tokens.push_back({t.at("text").get<std::string>(), parse_token_lang(t.at("lang").get<std::string>()),
                                span_from(t.at("span"))});
        }
        for (const auto& k : j.value("matched_keywords", json::array())) {
            c.matched_keywords.push_back({k.at("keyword").get<std::string>(), span_from(k.at("span"))});
        }
        if (j.contains("decided_by")) c.decided_by = j["decided_by"].get<std::string>();
        if (j.contains("decided_at")) c.decided_at = j["decided_at"].get<std::string>();
        // Run lengths are recomputed from the tokens when present so that an
        // edited file cannot smuggle in a longer Spanish run.
        if (!c.tokens.empty()) {
            c.max_run_es = max_consecutive_run(c.tokens, TokenLang::es);
            c.max_run_ca = max_consecutive_run(c.tokens, TokenLang::ca);
        } else {
            c.max_run_es = j.at("max_run_es").get<std::size_t>();
            c.max_run_ca = j.value("max_run_ca", std::size_t{0});
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad candidate record: ") + e.what());
    }
    if (c.max_run_es > c.counts.es || c.max_run_ca > c.counts.ca) {
        throw ParseError("candidate " + c.id() + ": run length exceeds language count");
    }
    if (c.status == CandidateStatus::pending && c.decided_by) {
        throw ParseError("candidate " + c.id() + ": pending candidate has decided_by");
    }
    return c;
}

void write_candidates(std::span<const CsCandidate> candidates, std::ostream& out) {
    for (const auto& c : candidates) out << to_json(c).dump() << '\n';
}

void save_candidates(std::span<const CsCandidate> candidates, const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    write_candidates(candidates, out);
    if (!out) throw IoError("write failed for " + path.string());
}

std::vector<CsCandidate> load_candidates(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open candidate file " + path.string());
    std::vector<CsCandidate> out;
    std::set<std::string> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            auto c = candidate_from_json(json::parse(line));
            if (!seen.insert(c.id()).second) throw DuplicateIdError(c.id(), line_no);
            out.push_back(std::move(c));
        } catch (const DuplicateIdError&) {
            throw;
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        }
    }
    return out;
}

} // namespace csforge
