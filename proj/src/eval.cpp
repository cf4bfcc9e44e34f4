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

#include "csforge/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "csforge/error.hpp"
#include "csforge/text.hpp"

namespace csforge {

using nlohmann::json;

std::string_view to_string(Experiment e) {
    switch (e) {
    case Experiment::base: return "base";
    case Experiment::synthetic: return "synthetic";
    case Experiment::tv3: return "tv3";
    case Experiment::tuples: return "tuples";
    }
    return "base";
}

Experiment parse_experiment(std::string_view s) {
    if (s == "base") return Experiment::base;
    if (s == "synthetic") return Experiment::synthetic;
    if (s == "tv3") return Experiment::tv3;
    if (s == "tuples") return Experiment::tuples;
    throw ParseError("invalid experiment \"" + std::string(s) + "\"");
}

AlignmentCounts& AlignmentCounts::operator+=(const AlignmentCounts& o) {
    substitutions += o.substitutions;
    deletions += o.deletions;
    insertions += o.insertions;
    ref_len += o.ref_len;
    return *this;
}

std::vector<std::string> normalize_transcript(std::string_view input) {
    const auto cps = text::decode(input);
    const auto word_char = [&](std::size_t k) {
        return k < cps.size() && (text::is_letter(cps[k].value) || text::is_digit(cps[k].value));
    };
    std::vector<std::string> words;
    std::string current;
    for (std::size_t k = 0; k < cps.size(); ++k) {
        const char32_t cp = cps[k].value;
        if (word_char(k)) {
            text::append_utf8(current, text::to_lower(cp));
        } else if (text::is_word_joiner(cp) && !current.empty() && word_char(k + 1)) {
            text::append_utf8(current, cp == text::kRightQuote ? U'\'' : cp);
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    return words;
}

std::vector<std::string> split_words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

AlignmentCounts align_counts(std::span<const std::string> ref, std::span<const std::string> hyp) {
    // Cost is (errors, insertions + deletions), compared lexicographically.
    struct Cost {
        std::size_t errors;
        std::size_t indels;
        bool operator<(const Cost& o) const { return errors != o.errors ? errors < o.errors : indels < o.indels; }
    };
    const std::size_t n = ref.size();
    const std::size_t m = hyp.size();
    std::vector<Cost> prev(m + 1);
    std::vector<Cost> cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = {j, j};
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = {i, i};
        for (std::size_t j = 1; j <= m; ++j) {
            const bool same = ref[i - 1] == hyp[j - 1];
            Cost best{prev[j - 1].errors + (same ? 0 : 1), prev[j - 1].indels};
            const Cost del{prev[j].errors + 1, prev[j].indels + 1};
            const Cost ins{cur[j - 1].errors + 1, cur[j - 1].indels + 1};
            if (del < best) best = del;
            if (ins < best) best = ins;
            cur[j] = best;
        }
        std::swap(prev, cur);
    }
    const Cost total = prev[m];
    // deletions - insertions = n - m, deletions + insertions = indels
    AlignmentCounts c;
    c.ref_len = n;
    c.deletions = (total.indels + n - m) / 2;
    c.insertions = total.indels - c.deletions;
    c.substitutions = total.errors - total.indels;
    return c;
}

WerResult word_error_rate(std::span<const std::string> ref, std::span<const std::string> hyp) {
    if (ref.empty()) throw InvalidArgument("WER needs a nonempty reference");
    WerResult r;
    r.counts = align_counts(ref, hyp);
    r.wer_pct = 100.0 * static_cast<double>(r.counts.errors()) / static_cast<double>(r.counts.ref_len);
    return r;
}

std::vector<Hypothesis> load_hypotheses(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open hypothesis file " + path.string());
    std::vector<Hypothesis> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            const auto j = json::parse(line);
            out.push_back({j.at("id").get<std::string>(), j.at("hyp").get<std::string>()});
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        }
    }
    return out;
}

void save_hypotheses(std::span<const Hypothesis> hyps, const std::filesystem::path& path,
                     std::span<const std::string> prompt_tokens) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    for (const auto& h : hyps) {
        json j{{"id", h.id}, {"hyp", h.hyp}};
        if (!prompt_tokens.empty()) j["prompt_tokens"] = std::vector<std::string>(prompt_tokens.begin(), prompt_tokens.end());
        out << j.dump() << '\n';
    }
}

SetEvaluation evaluate_set(const Manifest& refs, std::span<const Hypothesis> hyps, bool normalize) {
    std::unordered_map<std::string, const Utterance*> by_id;
    for (const auto& u : refs.entries) by_id.emplace(u.id, &u);

    const auto words = [normalize](std::string_view s) { return normalize ? normalize_transcript(s) : split_words(s); };

    SetEvaluation ev;
    std::set<std::string> seen;
    double wer_sum = 0.0;
    std::size_t wer_n = 0;
    for (const auto& h : hyps) {
        const auto it = by_id.find(h.id);
        if (it == by_id.end()) throw NotFound("hypothesis id \"" + h.id + "\" has no reference");
        if (!seen.insert(h.id).second) throw InvalidArgument("duplicate hypothesis id \"" + h.id + "\"");
        const auto ref_words = words(it->second->text);
        const auto hyp_words = words(h.hyp);
        const auto c = align_counts(ref_words, hyp_words);
        ev.totals += c;
        ++ev.utterances;
        if (c.ref_len > 0) {
            wer_sum += 100.0 * static_cast<double>(c.errors()) / static_cast<double>(c.ref_len);
            ++wer_n;
        }
    }
    if (ev.utterances == 0) throw InvalidArgument("no hypotheses to evaluate");
    if (ev.totals.ref_len == 0) throw InvalidArgument("all evaluated references are empty");
    ev.pooled_wer_pct = 100.0 * static_cast<double>(ev.totals.errors()) / static_cast<double>(ev.totals.ref_len);
    ev.mean_utterance_wer_pct = wer_n ? wer_sum / static_cast<double>(wer_n) : 0.0;
    return ev;
}

json to_json(const EvalRecord& r) {
    json tokens = json::array();
    for (const auto t : r.decoding_tokens) tokens.push_back(to_string(t));
    return {{"experiment", to_string(r.experiment)},
            {"decoding_tokens", tokens},
            {"dataset", r.dataset},
            {"wer_pct", r.wer_pct}};
}

EvalRecord eval_record_from_json(const json& j) {
    EvalRecord r;
    try {
        r.experiment = parse_experiment(j.at("experiment").get<std::string>());
        for (const auto& t : j.at("decoding_tokens")) r.decoding_tokens.push_back(parse_asr_lang(t.get<std::string>()));
        r.dataset = j.at("dataset").get<std::string>();
        r.wer_pct = j.at("wer_pct").get<double>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad eval record: ") + e.what());
    } catch (const InvalidArgument& e) {
        throw ParseError(std::string("bad eval record: ") + e.what());
    }
    if (!(r.wer_pct >= 0.0)) throw ParseError("wer_pct must be >= 0");
    PromptConfig::with_tokens(r.decoding_tokens).validate();
    return r;
}

std::vector<EvalRecord> load_eval_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open results file " + path.string());
    std::vector<EvalRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        try {
            out.push_back(eval_record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ": " + e.what(), line_no);
        }
    }
    return out;
}

namespace {

const std::vector<std::vector<AsrLang>>& token_rows() {
    static const std::vector<std::vector<AsrLang>> rows{
        {}, {AsrLang::ca, AsrLang::es}, {AsrLang::es, AsrLang::ca}, {AsrLang::ca}, {AsrLang::es}};
    return rows;
}

constexpr Experiment kExperiments[] = {Experiment::base, Experiment::synthetic, Experiment::tv3, Experiment::tuples};

std::string experiment_label(Experiment e) {
    switch (e) {
    case Experiment::base: return "Base model";
    case Experiment::synthetic: return "Synthetic data";
    case Experiment::tv3: return "TV3";
    case Experiment::tuples: return "Tuples";
    }
    return "";
}

// Position of the (experiment, tokens) row; rows with unusual token lists
// sort after the canonical ones of their experiment.
std::size_t row_rank(const EvalRecord& r) {
    const auto& rows = token_rows();
    const auto it = std::find(rows.begin(), rows.end(), r.decoding_tokens);
    return static_cast<std::size_t>(r.experiment) * 16 + static_cast<std::size_t>(it - rows.begin());
}

struct Cell {
    Experiment experiment;
    std::vector<AsrLang> tokens;
    std::string dataset;
    bool operator<(const Cell& o) const {
        return std::tie(experiment, tokens, dataset) < std::tie(o.experiment, o.tokens, o.dataset);
    }
};

std::map<Cell, double> collect_cells(std::span<const EvalRecord> records) {
    std::map<Cell, double> cells;
    for (const auto& r : records) {
        const Cell key{r.experiment, r.decoding_tokens, r.dataset};
        const auto [it, inserted] = cells.emplace(key, r.wer_pct);
        if (!inserted && it->second != r.wer_pct) {
            throw ConflictError("conflicting WER for " + std::string(to_string(r.experiment)) + " " +
                                lang_tokens_label(r.decoding_tokens) + " on " + r.dataset);
        }
    }
    return cells;
}

std::vector<std::string> dataset_columns(std::span<const EvalRecord> records) {
    static const std::vector<std::string> known{"TV3", "ParlamentParla", "Corts"};
    std::set<std::string> present;
    for (const auto& r : records) present.insert(r.dataset);
    std::vector<std::string> cols;
    for (const auto& k : known) {
        if (present.erase(k)) cols.push_back(k);
    }
    cols.insert(cols.end(), present.begin(), present.end());
    if (cols.empty()) cols = known;
    return cols;
}

std::string format_wer(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string pad(const std::string& s, std::size_t width) {
    // Labels are ASCII so byte length equals display width.
    return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

struct Row {
    Experiment experiment;
    std::vector<AsrLang> tokens;
};

std::vector<Row> table_rows(const std::map<Cell, double>& cells) {
    std::vector<Row> rows;
    std::set<std::pair<Experiment, std::vector<AsrLang>>> seen;
    for (const auto& [cell, _] : cells) seen.insert({cell.experiment, cell.tokens});
    for (const auto e : kExperiments) {
        for (const auto& t : token_rows()) {
            if (seen.erase({e, t})) rows.push_back({e, t});
        }
    }
    for (const auto& [e, t] : seen) rows.push_back({e, t});
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.experiment < b.experiment; });
    return rows;
}

} // namespace

std::string results_table(std::span<const EvalRecord> records) {
    const auto cells = collect_cells(records);
    const auto cols = dataset_columns(records);
    const auto rows = table_rows(cells);

    std::vector<std::vector<std::string>> grid;
    grid.push_back({"Experiment", "Decoding Tokens"});
    grid.back().insert(grid.back().end(), cols.begin(), cols.end());
    std::optional<Experiment> last;
    for (const auto& row : rows) {
        std::vector<std::string> line;
        line.push_back(last == row.experiment ? "" : experiment_label(row.experiment));
        line.push_back(lang_tokens_label(row.tokens));
        for (const auto& col : cols) {
            const auto it = cells.find({row.experiment, row.tokens, col});
            line.push_back(it == cells.end() ? "" : format_wer(it->second));
        }
        grid.push_back(std::move(line));
        last = row.experiment;
    }

    std::vector<std::size_t> width(grid.front().size(), 0);
    for (const auto& line : grid) {
        for (std::size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
    }
    std::string out;
    for (const auto& line : grid) {
        std::string rendered;
        for (std::size_t c = 0; c < line.size(); ++c) {
            rendered += c + 1 == line.size() ? line[c] : pad(line[c], width[c] + 2);
        }
        while (!rendered.empty() && rendered.back() == ' ') rendered.pop_back();
        out += rendered;
        out += '\n';
    }
    return out;
}

std::string results_lines(std::span<const EvalRecord> records) {
    const auto cells = collect_cells(records);
    const auto cols = dataset_columns(records);
    std::string out;
    for (const auto& row : table_rows(cells)) {
        for (const auto& col : cols) {
            const auto it = cells.find({row.experiment, row.tokens, col});
            if (it == cells.end()) continue;
            out += to_json(EvalRecord{row.experiment, row.tokens, col, it->second}).dump();
            out += '\n';
        }
    }
    return out;
}

BestConfiguration best_configuration(std::span<const EvalRecord> records, std::string_view dataset) {
    const EvalRecord* best = nullptr;
    for (const auto& r : records) {
        if (r.dataset != dataset) continue;
        if (!best || r.wer_pct < best->wer_pct || (r.wer_pct == best->wer_pct && row_rank(r) < row_rank(*best))) {
            best = &r;
        }
    }
    if (!best) throw NotFound("no records for dataset \"" + std::string(dataset) + "\"");
    return {best->experiment, best->decoding_tokens, best->wer_pct};
}

} // namespace csforge
