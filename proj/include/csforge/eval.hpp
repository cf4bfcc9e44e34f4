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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csforge/corpus.hpp"
#include "csforge/prompt.hpp"

namespace csforge {

enum class Experiment { base, synthetic, tv3, tuples };

std::string_view to_string(Experiment e);
Experiment parse_experiment(std::string_view s);

// One cell of a results matrix: (fine-tuning experiment, decoding tokens,
// test set) -> WER.
struct EvalRecord {
    Experiment experiment = Experiment::base;
    std::vector<AsrLang> decoding_tokens;
    std::string dataset;
    double wer_pct = 0.0;

    bool operator==(const EvalRecord&) const = default;
};

struct AlignmentCounts {
    std::size_t substitutions = 0;
    std::size_t deletions = 0;
    std::size_t insertions = 0;
    std::size_t ref_len = 0;

    std::size_t errors() const { return substitutions + deletions + insertions; }
    AlignmentCounts& operator+=(const AlignmentCounts& o);
    bool operator==(const AlignmentCounts&) const = default;
};

// Lowercase; keep letters, digits, and apostrophes / middle dots that sit
// inside a word; everything else is a word boundary. Diacritics are kept.
std::vector<std::string> normalize_transcript(std::string_view text);

// Whitespace split with no other processing.
std::vector<std::string> split_words(std::string_view text);

struct WerResult {
    double wer_pct = 0.0;
    AlignmentCounts counts;
};

// Unit-cost Levenshtein alignment. Among alignments with the minimal number
// of errors, the one with the most substitutions is reported, which makes
// the S/D/I split unique. Throws InvalidArgument on an empty reference.
WerResult word_error_rate(std::span<const std::string> ref, std::span<const std::string> hyp);

// Counts only; an empty reference is allowed (all insertions).
AlignmentCounts align_counts(std::span<const std::string> ref, std::span<const std::string> hyp);

struct Hypothesis {
    std::string id;
    std::string hyp;
};

std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path);
void save_hypotheses(std::span<const Hypothesis> hyps, const std::filesystem::path& path,
                     std::span<const std::string> prompt_tokens = {});

struct SetEvaluation {
    double pooled_wer_pct = 0.0;         // 100 * sum(S+D+I) / sum(|ref|)
    double mean_utterance_wer_pct = 0.0; // over utterances with nonempty reference
    AlignmentCounts totals;
    std::size_t utterances = 0;
};

// Every hypothesis id must exist in refs. References without a hypothesis
// are skipped.
SetEvaluation evaluate_set(const Manifest& refs, std::span<const Hypothesis> hyps, bool normalize = true);

nlohmann::json to_json(const EvalRecord& r);
EvalRecord eval_record_from_json(const nlohmann::json& j);
std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path);

// Row order is experiment (base, synthetic, tv3, tuples) x tokens
// (none, <ca><es>, <es><ca>, <ca>, <es>); rows with no record are omitted.
// Columns are TV3, ParlamentParla, Corts, then any other dataset sorted by
// name. Missing cells are blank. Throws ConflictError on two records for
// the same cell with different values.
std::string results_table(std::span<const EvalRecord> records);

// One JSON object per record, in table order.
std::string results_lines(std::span<const EvalRecord> records);

struct BestConfiguration {
    Experiment experiment;
    std::vector<AsrLang> decoding_tokens;
    double wer_pct;
};

// Minimal WER for the dataset; ties go to the earlier table row.
BestConfiguration best_configuration(std::span<const EvalRecord> records, std::string_view dataset);

} // namespace csforge
