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
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csforge/corpus.hpp"
#include "csforge/langid.hpp"

namespace csforge {

enum class DetectionMethod { keyword, token_count };
enum class CandidateStatus { pending, accepted, rejected };
enum class Decision { accept, reject };

std::string_view to_string(DetectionMethod m);
std::string_view to_string(CandidateStatus s);
std::string_view to_string(Decision d);
DetectionMethod parse_detection_method(std::string_view s);
CandidateStatus parse_candidate_status(std::string_view s);
Decision parse_decision(std::string_view s);

// Minimum run of consecutive Spanish tokens a manually reviewed candidate
// needs before it can be accepted.
inline constexpr std::size_t kMinSpanishRun = 3;
// Minimum Catalan and Spanish token counts for the token-count detector.
inline constexpr std::size_t kMinWordsEach = 3;
// Utterances longer than this are flagged in the log during scans.
inline constexpr double kLongUtteranceS = 30.0;

struct KeywordMatch {
    std::string keyword;
    Span span;

    bool operator==(const KeywordMatch&) const = default;
};

// Lowercase marker words; matching is always whole-word.
class KeywordSet {
public:
    explicit KeywordSet(std::vector<std::string> keywords);

    // {"y"}.
    static KeywordSet defaults();
    // One keyword per line; blank lines and '#' comments are skipped.
    static KeywordSet load(const std::filesystem::path& path);

    bool contains(const std::string& normalized) const { return words_.contains(normalized); }
    const std::set<std::string>& words() const { return words_; }

private:
    std::set<std::string> words_;
};

struct CsCandidate {
    Utterance utterance;
    std::vector<TaggedToken> tokens;
    LangCounts counts;
    std::vector<KeywordMatch> matched_keywords;
    std::size_t max_run_es = 0;
    std::size_t max_run_ca = 0;
    DetectionMethod method = DetectionMethod::keyword;
    CandidateStatus status = CandidateStatus::pending;
    std::optional<std::string> decided_by;
    std::optional<std::string> decided_at;

    const std::string& id() const { return utterance.id; }
    bool operator==(const CsCandidate&) const = default;
};

std::size_t max_consecutive_run(std::span<const TaggedToken> tokens, TokenLang lang);

bool is_code_switched(const LangCounts& counts, std::size_t min_each = kMinWordsEach);

// Pending candidate when the utterance contains any keyword as a whole word.
std::optional<CsCandidate> keyword_candidate(const Utterance& u, const KeywordSet& keywords,
                                             const LangLexicon& lex, double threshold = kDefaultThreshold);

// Accepted candidate when both languages reach min_each tokens.
std::optional<CsCandidate> token_count_candidate(const Utterance& u, const LangLexicon& lex,
                                                 double threshold = kDefaultThreshold,
                                                 std::size_t min_each = kMinWordsEach);

struct ScanOptions {
    double threshold = kDefaultThreshold;
    std::size_t min_each = kMinWordsEach;
};

// Keyword hits come back pending (they need manual review); token-count hits
// come back accepted, decided_by "auto:token_count".
std::vector<CsCandidate> scan_corpus(const Manifest& m, DetectionMethod method, const LangLexicon& lex,
                                     const KeywordSet& keywords, const ScanOptions& opts = {});

// Pure state transition for a manual decision. Throws AlreadyDecided when the
// candidate is not pending and RuleViolation when accepting with
// max_run_es < kMinSpanishRun.
CsCandidate decide(const CsCandidate& c, Decision decision, std::string_view annotator,
                   std::string_view timestamp);

nlohmann::json to_json(const CsCandidate& c);
CsCandidate candidate_from_json(const nlohmann::json& j);

void write_candidates(std::span<const CsCandidate> candidates, std::ostream& out);
void save_candidates(std::span<const CsCandidate> candidates, const std::filesystem::path& path);
std::vector<CsCandidate> load_candidates(const std::filesystem::path& path);

} // namespace csforge
