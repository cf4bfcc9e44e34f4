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

#include "csforge/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include <csignal>
#include <pthread.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "csforge/audio.hpp"
#include "csforge/augment.hpp"
#include "csforge/clients.hpp"
#include "csforge/concat.hpp"
#include "csforge/corpus.hpp"
#include "csforge/detect.hpp"
#include "csforge/error.hpp"
#include "csforge/eval.hpp"
#include "csforge/langid.hpp"
#include "csforge/log.hpp"
#include "csforge/prompt.hpp"
#include "csforge/random.hpp"
#include "csforge/review.hpp"
#include "csforge/textgen.hpp"
#include "csforge/text.hpp"
#include "csforge/translate.hpp"

namespace csforge::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string file_safe(std::string_view s) {
    std::string out;
    for (const char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out;
}

fs::path default_root(const fs::path& manifest, const std::string& override_root) {
    if (!override_root.empty()) return override_root;
    return manifest.has_parent_path() ? manifest.parent_path() : fs::path(".");
}

void write_lines(const fs::path& path, const std::string& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << body;
}

std::string env_or(const char* name, const std::string& fallback) {
    if (!fallback.empty()) return fallback;
    const char* v = std::getenv(name);
    return v ? v : "";
}

// ---------------------------------------------------------------- detect

struct DetectArgs {
    std::string in, lexicon_dir, method = "keyword", keywords, out;
    double threshold = kDefaultThreshold;
    std::size_t min_each = kMinWordsEach;
};

int cmd_detect(const DetectArgs& a, std::ostream& out) {
    const auto manifest = load_manifest(a.in);
    const auto lex = LangLexicon::load(a.lexicon_dir);
    const auto keywords = a.keywords.empty() ? KeywordSet::defaults() : KeywordSet::load(a.keywords);
    const auto method = parse_detection_method(a.method);
    const auto candidates = scan_corpus(manifest, method, lex, keywords, {a.threshold, a.min_each});
    save_candidates(candidates, a.out);
    std::size_t pending = 0, accepted = 0, eligible = 0;
    for (const auto& c : candidates) {
        (c.status == CandidateStatus::pending ? pending : accepted)++;
        if (c.max_run_es >= kMinSpanishRun) ++eligible;
    }
    out << "scanned " << manifest.size() << " utterances, " << candidates.size() << " candidates (" << pending
        << " pending, " << accepted << " accepted, " << eligible << " with a Spanish run >= " << kMinSpanishRun
        << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------- split / stats

struct SplitArgs {
    std::string in, train_out, test_out;
    double fraction = 0.7;
    std::uint64_t seed = 0;
};

int cmd_split(const SplitArgs& a, std::ostream& out) {
    const auto m = load_manifest(a.in);
    const auto [train, test] = split_manifest(m, {a.fraction, a.seed});
    save_manifest(train, a.train_out);
    save_manifest(test, a.test_out);
    out << "train " << train.size() << ", test " << test.size() << "\n";
    return kExitOk;
}

int cmd_stats(const std::string& in, std::ostream& out) {
    const auto s = manifest_stats(load_manifest(in));
    out << "utterances " << s.count << "\n"
        << "hours " << std::fixed << std::setprecision(3) << s.total_hours << "\n"
        << "gender male=" << s.male << " female=" << s.female << " unspecified=" << s.unspecified << "\n"
        << "lang ca=" << s.ca << " es=" << s.es << " mixed=" << s.mixed << " unknown=" << s.unknown << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- textgen

struct TextgenArgs {
    std::string in, pos_lexicon, dict, mt_endpoint, out, manifest_out;
    std::string tts_endpoint, voice_id = "default", audio_out_dir;
    std::uint64_t seed = 0;
    std::size_t min_tokens = 4, max_tokens = 25;
};

int cmd_textgen(const TextgenArgs& a, std::ostream& out) {
    const auto manifest = load_manifest(a.in);
    const auto pos = PosLexicon::load(a.pos_lexicon);
    std::unique_ptr<Translator> translator;
    const auto mt = env_or("CS_FORGE_MT_URL", a.mt_endpoint);
    if (!mt.empty()) {
        translator = std::make_unique<HttpTranslator>(mt);
    } else if (!a.dict.empty()) {
        translator = std::make_unique<DictionaryTranslator>(DictionaryTranslator::load(a.dict));
    } else {
        throw InvalidArgument("textgen needs --dict or --mt-endpoint");
    }
    std::optional<TtsClient> tts;
    const auto tts_url = env_or("CS_FORGE_TTS_URL", a.tts_endpoint);
    if (!tts_url.empty()) {
        if (a.audio_out_dir.empty()) throw InvalidArgument("--tts-endpoint needs --audio-out-dir");
        tts.emplace(tts_url);
    }

    const LengthBounds bounds{a.min_tokens, a.max_tokens};
    if (bounds.min_tokens > bounds.max_tokens) throw InvalidArgument("--min-tokens exceeds --max-tokens");
    std::string tagged_lines;
    Manifest sidecar;
    sidecar.source_name = "textgen";
    std::size_t skipped_lang = 0, skipped_len = 0, no_chunk = 0;
    for (const auto& u : manifest.entries) {
        if (u.lang != CorpusLang::ca) {
            ++skipped_lang;
            continue;
        }
        if (!within_length(u.text, bounds)) {
            ++skipped_len;
            continue;
        }
        const auto s = generate_cs_sentence(u, pos, *translator, a.seed);
        if (!s) {
            ++no_chunk;
            continue;
        }
        const auto rendered = render_tagged(*s);
        tagged_lines += rendered + "\n";
        Utterance g;
        g.id = u.id + "__cs";
        g.text = s->plain_text();
        g.lang = CorpusLang::mixed;
        g.speaker_id = u.speaker_id;
        g.gender = u.gender;
        g.extra = to_json(*s);
        g.extra.erase("text");
        g.extra["tagged"] = rendered;
        if (tts) {
            const auto audio = tts->synthesize({content_request_id("tts", rendered + "|" + a.voice_id),
                                                route_segments(rendered), a.voice_id});
            const auto rel = file_safe(g.id) + ".wav";
            write_wav(resample_linear(audio, kCanonicalRate), fs::path(a.audio_out_dir) / rel);
            g.audio_path = rel;
            g.duration_s = audio.duration_s();
            g.extra["voice_id"] = a.voice_id;
        }
        sidecar.entries.push_back(std::move(g));
    }
    write_lines(a.out, tagged_lines);
    const fs::path manifest_out = a.manifest_out.empty() ? fs::path(a.out).replace_extension(".manifest.jsonl")
                                                         : fs::path(a.manifest_out);
    save_manifest(sidecar, manifest_out);
    out << "generated " << sidecar.size() << " sentences (skipped " << skipped_lang << " non-Catalan, "
        << skipped_len << " outside length bounds, " << no_chunk << " without noun chunks)\n";
    return kExitOk;
}

// ---------------------------------------------------------------- concat

struct ConcatArgs {
    std::string ca, es, out_dir, ca_root, es_root, manifest_out;
    std::uint64_t seed = 0;
    double gap_s = 0.0;
    int rate = kCanonicalRate;
    bool no_balance = false;
    bool plan_only = false;
};

int cmd_concat(const ConcatArgs& a, std::ostream& out) {
    TuplePlan plan;
    plan.ca_pool = load_manifest(a.ca);
    plan.es_pool = load_manifest(a.es);
    plan.gap_s = a.gap_s;
    plan.seed = a.seed;
    plan.balance_gender = !a.no_balance;
    if (a.gap_s < 0) throw InvalidArgument("--gap-s must be >= 0");
    const auto entries = plan_tuples(plan);

    std::map<std::string, const Utterance*> ca_by_id, es_by_id;
    for (const auto& u : plan.ca_pool.entries) ca_by_id.emplace(u.id, &u);
    for (const auto& u : plan.es_pool.entries) es_by_id.emplace(u.id, &u);

    const MaterializeOptions opts{default_root(a.ca, a.ca_root), default_root(a.es, a.es_root), a.out_dir, a.rate};
    std::vector<TuplePair> tuples;
    std::ostringstream lines;
    for (const auto& e : entries) {
        if (a.plan_only) {
            lines << json{{"id", tuple_id(e)}, {"order", to_string(e.order)}, {"ca_id", e.ca_id}, {"es_id", e.es_id}}
                         .dump()
                  << '\n';
            continue;
        }
        tuples.push_back(materialize_tuple(e, *ca_by_id.at(e.ca_id), *es_by_id.at(e.es_id), a.gap_s, opts));
        lines << to_json(tuples.back()).dump() << '\n';
    }
    const fs::path manifest_out =
        a.manifest_out.empty() ? fs::path(a.out_dir) / "tuples.jsonl" : fs::path(a.manifest_out);
    write_lines(manifest_out, lines.str());
    std::size_t ca_es = 0;
    for (const auto& e : entries) ca_es += e.order == TupleOrder::ca_es;
    out << entries.size() << " tuples (" << ca_es << " ca_es, " << entries.size() - ca_es << " es_ca)";
    if (!a.plan_only) out << ", " << std::fixed << std::setprecision(3) << total_duration_hours(tuples) << " h";
    out << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
    std::string in, out_dir, noise_dir, config, audio_root, order;
    std::uint64_t seed = 0;
    int rate = kCanonicalRate;
};

std::vector<AudioBuffer> load_noise_bank(const AugmentArgs& a, AugmentationConfig& cfg) {
    std::vector<AudioBuffer> bank;
    if (!a.noise_dir.empty()) {
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(a.noise_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".wav") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        for (const auto& f : files) cfg.noise.noise_bank.push_back(f.string());
    }
    for (const auto& f : cfg.noise.noise_bank) bank.push_back(read_wav(f));
    if (bank.empty()) {
        log::info("no noise files given; using generated pseudo-noise");
        bank.push_back(make_pseudo_noise(5.0, a.rate, mix_seed(a.seed, "pseudo-noise")));
    }
    return bank;
}

int cmd_augment(const AugmentArgs& a, std::ostream& out) {
    const auto manifest = load_manifest(a.in);
    AugmentationConfig cfg;
    if (!a.config.empty()) {
        std::ifstream in(a.config);
        if (!in) throw IoError("cannot open config " + a.config);
        try {
            cfg = config_from_json(json::parse(in));
        } catch (const json::exception& e) {
            throw ParseError(a.config + ": " + e.what());
        }
    }
    if (!a.order.empty()) {
        cfg.order.clear();
        for (const auto& s : text::split(a.order, ',')) cfg.order.push_back(parse_augment_stage(text::trim(s)));
    }
    cfg.validate();
    const auto bank = load_noise_bank(a, cfg);
    const auto root = default_root(a.in, a.audio_root);
    const fs::path out_dir(a.out_dir);

    Manifest result;
    result.source_name = "augmented";
    std::ostringstream applied;
    std::set<std::string> used_names;
    for (const auto& u : manifest.entries) {
        if (!u.audio_path) throw IoError("utterance " + u.id + " has no audio_path");
        const auto x = resample_linear(read_wav(root / *u.audio_path), a.rate);
        AugmentationConfig per = cfg;
        per.seed = mix_seed(a.seed, u.id);
        const auto r = apply_chain(x, per, bank);
        const auto name = file_safe(u.id) + ".wav";
        if (!used_names.insert(name).second) throw InvalidArgument("two utterance ids map to file " + name);
        write_wav(r.audio, out_dir / name);
        Utterance v = u;
        v.audio_path = name;
        v.duration_s = r.audio.duration_s();
        result.entries.push_back(std::move(v));
        auto rec = r.log.to_json();
        rec["id"] = u.id;
        applied << rec.dump() << '\n';
    }
    save_manifest(result, out_dir / "manifest.jsonl");
    write_lines(out_dir / "applied_log.jsonl", applied.str());
    out << "augmented " << result.size() << " utterances into " << out_dir.string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- prompt / transcribe

struct PromptArgs {
    std::string lang_tokens = "ca,es";
    bool timestamps = false;
    std::string previous_text;
    bool as_json = false;
};

int cmd_prompt(const PromptArgs& a, std::ostream& out) {
    PromptConfig cfg{parse_lang_tokens(a.lang_tokens), a.timestamps, std::nullopt};
    if (!a.previous_text.empty()) cfg.previous_text = a.previous_text;
    if (a.as_json) {
        out << json(build_prompt(cfg)).dump() << "\n";
    } else {
        out << prompt_string(cfg) << "\n";
    }
    return kExitOk;
}

struct TranscribeArgs {
    std::string in, endpoint, lang_tokens = "ca,es", model_id = "whisper-large-v3", out, audio_root;
    std::size_t max_in_flight = kDefaultMaxInFlight;
};

int cmd_transcribe(const TranscribeArgs& a, std::ostream& out) {
    const auto manifest = load_manifest(a.in);
    const auto url = env_or("CS_FORGE_ASR_URL", a.endpoint);
    if (url.empty()) throw InvalidArgument("transcribe needs --asr-endpoint or CS_FORGE_ASR_URL");
    PromptConfig prompt;
    prompt.lang_tokens = parse_lang_tokens(a.lang_tokens);
    const auto tokens = build_prompt(prompt);
    const auto root = default_root(a.in, a.audio_root);
    std::vector<AsrRequest> requests;
    for (const auto& u : manifest.entries) {
        if (!u.audio_path) throw IoError("utterance " + u.id + " has no audio_path");
        requests.push_back({u.id, root / *u.audio_path, prompt, a.model_id});
    }
    const AsrClient client(url);
    const auto texts = client.transcribe_batch(requests, a.max_in_flight);
    std::vector<Hypothesis> hyps;
    for (std::size_t i = 0; i < texts.size(); ++i) hyps.push_back({manifest.entries[i].id, texts[i]});
    save_hypotheses(hyps, a.out, tokens);
    out << "transcribed " << hyps.size() << " utterances with " << prompt_string(prompt) << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------- eval / table

struct EvalArgs {
    std::string refs, hyps, report = "table", experiment = "base", dataset, lang_tokens = "none";
    bool no_normalize = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto refs = load_manifest(a.refs);
    const auto hyps = load_hypotheses(a.hyps);
    const auto ev = evaluate_set(refs, hyps, !a.no_normalize);
    const EvalRecord record{parse_experiment(a.experiment), parse_lang_tokens(a.lang_tokens),
                            a.dataset.empty() ? fs::path(a.refs).stem().string() : a.dataset, ev.pooled_wer_pct};
    if (a.report == "lines") {
        auto j = to_json(record);
        j["mean_utterance_wer_pct"] = ev.mean_utterance_wer_pct;
        j["utterances"] = ev.utterances;
        j["substitutions"] = ev.totals.substitutions;
        j["deletions"] = ev.totals.deletions;
        j["insertions"] = ev.totals.insertions;
        j["ref_words"] = ev.totals.ref_len;
        out << j.dump() << "\n";
    } else {
        const std::vector<EvalRecord> one{record};
        out << results_table(one);
        out << std::fixed << std::setprecision(2) << "pooled WER " << ev.pooled_wer_pct << " %, mean utterance WER "
            << ev.mean_utterance_wer_pct << " % over " << ev.utterances << " utterances (S=" << ev.totals.substitutions
            << " D=" << ev.totals.deletions << " I=" << ev.totals.insertions << " N=" << ev.totals.ref_len << ")\n";
    }
    return kExitOk;
}

struct TableArgs {
    std::string records, report = "table";
    std::vector<std::string> best;
};

int cmd_table(const TableArgs& a, std::ostream& out) {
    const auto records = load_eval_records(a.records);
    out << (a.report == "lines" ? results_lines(records) : results_table(records));
    for (const auto& d : a.best) {
        const auto b = best_configuration(records, d);
        out << "best " << d << ": " << to_string(b.experiment) << " " << lang_tokens_label(b.decoding_tokens) << " "
            << std::fixed << std::setprecision(2) << b.wer_pct << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------- review

struct ReviewArgs {
    std::string candidates, log, audio_root, ui_dir, host = "127.0.0.1", out;
    int port = 0;
};

fs::path log_path_for(const ReviewArgs& a) {
    return a.log.empty() ? fs::path(a.candidates + ".decisions.jsonl") : fs::path(a.log);
}

int cmd_review_serve(const ReviewArgs& a, std::ostream& out) {
    ReviewStore store(a.candidates, log_path_for(a));
    ReviewServerOptions opts;
    opts.audio_root = default_root(a.candidates, a.audio_root);
    if (!a.ui_dir.empty()) opts.ui_dir = a.ui_dir;
    ReviewServer server(store, opts);

    // Signals go to a dedicated thread so the handler is not async-signal bound.
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);

    const int port = server.bind(a.host, a.port ? a.port : review_port_from_env());
    out << "review service on http://" << a.host << ":" << port << "/api/ (log " << store.log_path().string()
        << ")" << std::endl;
    std::thread([&server, set] {
        int sig = 0;
        sigwait(&set, &sig);
        server.stop();
    }).detach();
    server.listen();
    return kExitOk;
}

int cmd_export(const ReviewArgs& a, std::ostream& out) {
    const ReviewStore store(a.candidates, log_path_for(a));
    const auto m = store.export_accepted();
    save_manifest(m, a.out);
    out << "exported " << m.size() << " accepted utterances\n";
    return kExitOk;
}

// ---------------------------------------------------------------- lexicon

int cmd_lexicon_ngrams(const std::string& dir, const std::string& out_path, std::ostream& out) {
    const auto lex = LangLexicon::load(dir);
    const auto weights = estimate_ngram_weights(lex.ca_words(), lex.es_words());
    std::ostringstream body;
    body << "ngram\tweight\n";
    for (const auto& [g, w] : weights) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6f", w);
        body << g << '\t' << buf << '\n';
    }
    write_lines(out_path, body.str());
    out << "wrote " << weights.size() << " n-gram weights\n";
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"cs-forge: Catalan-Spanish code-switching corpus tools", "cs-forge"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "cs-forge 0.1.0");

    // Log lines go to the same error stream as usage errors.
    const auto previous_sink = log::set_sink([&err](log::Level level, std::string_view msg) {
        err << (level == log::Level::warning ? "[warn] " : "[info] ") << msg << '\n';
    });
    struct RestoreSink {
        log::Sink sink;
        ~RestoreSink() { log::set_sink(std::move(sink)); }
    } restore{previous_sink};

    std::function<int()> action;

    DetectArgs det;
    auto* detect = app.add_subcommand("detect", "Find code-switching candidates in a manifest");
    detect->add_option("--in", det.in, "Input manifest")->required()->check(CLI::ExistingFile);
    detect->add_option("--lexicon-dir", det.lexicon_dir, "Directory with ca.txt, es.txt, ngrams.tsv")
        ->required()
        ->check(CLI::ExistingDirectory);
    detect->add_option("--method", det.method, "keyword or token_count")
        ->check(CLI::IsMember({"keyword", "token_count"}));
    detect->add_option("--keywords", det.keywords, "Keyword file")->check(CLI::ExistingFile);
    detect->add_option("--threshold", det.threshold, "n-gram score threshold");
    detect->add_option("--min-each", det.min_each, "Minimum tokens per language for token_count");
    detect->add_option("--out", det.out, "Candidate file to write")->required();
    detect->callback([&] { action = [&] { return cmd_detect(det, out); }; });

    SplitArgs spl;
    auto* split = app.add_subcommand("split", "Seeded train/test split of a manifest");
    split->add_option("--in", spl.in)->required()->check(CLI::ExistingFile);
    split->add_option("--train-out", spl.train_out)->required();
    split->add_option("--test-out", spl.test_out)->required();
    split->add_option("--train-fraction", spl.fraction)->check(CLI::Range(0.0, 1.0));
    split->add_option("--seed", spl.seed)->required();
    split->callback([&] { action = [&] { return cmd_split(spl, out); }; });

    std::string stats_in;
    auto* stats = app.add_subcommand("stats", "Summarize a manifest");
    stats->add_option("--in", stats_in)->required()->check(CLI::ExistingFile);
    stats->callback([&] { action = [&] { return cmd_stats(stats_in, out); }; });

    TextgenArgs tg;
    auto* textgen = app.add_subcommand("textgen", "Generate tagged synthetic code-switched sentences");
    textgen->add_option("--in", tg.in, "Catalan manifest")->required()->check(CLI::ExistingFile);
    textgen->add_option("--pos-lexicon", tg.pos_lexicon)->required()->check(CLI::ExistingFile);
    textgen->add_option("--dict", tg.dict, "Offline ca->es dictionary")->check(CLI::ExistingFile);
    textgen->add_option("--mt-endpoint", tg.mt_endpoint, "MT service URL (or CS_FORGE_MT_URL)");
    textgen->add_option("--tts-endpoint", tg.tts_endpoint, "TTS service URL (or CS_FORGE_TTS_URL)");
    textgen->add_option("--voice-id", tg.voice_id);
    textgen->add_option("--audio-out-dir", tg.audio_out_dir);
    textgen->add_option("--min-tokens", tg.min_tokens);
    textgen->add_option("--max-tokens", tg.max_tokens);
    textgen->add_option("--out", tg.out, "Tagged sentences, one per line")->required();
    textgen->add_option("--manifest-out", tg.manifest_out, "Sidecar manifest");
    textgen->add_option("--seed", tg.seed)->required();
    textgen->callback([&] { action = [&] { return cmd_textgen(tg, out); }; });

    ConcatArgs cc;
    auto* concat = app.add_subcommand("concat", "Concatenate Catalan and Spanish clips into tuples");
    concat->add_option("--ca", cc.ca)->required()->check(CLI::ExistingFile);
    concat->add_option("--es", cc.es)->required()->check(CLI::ExistingFile);
    concat->add_option("--ca-audio-root", cc.ca_root);
    concat->add_option("--es-audio-root", cc.es_root);
    concat->add_option("--out-dir", cc.out_dir)->required();
    concat->add_option("--manifest-out", cc.manifest_out);
    concat->add_option("--gap-s", cc.gap_s);
    concat->add_option("--rate", cc.rate);
    concat->add_flag("--no-gender-balance", cc.no_balance);
    concat->add_flag("--plan-only", cc.plan_only, "Write the pairing without reading audio");
    concat->add_option("--seed", cc.seed)->required();
    concat->callback([&] { action = [&] { return cmd_concat(cc, out); }; });

    AugmentArgs ag;
    auto* augment = app.add_subcommand("augment", "Apply the augmentation chain to every utterance");
    augment->add_option("--in", ag.in)->required()->check(CLI::ExistingFile);
    augment->add_option("--out-dir", ag.out_dir)->required();
    augment->add_option("--noise-dir", ag.noise_dir)->check(CLI::ExistingDirectory);
    augment->add_option("--config", ag.config, "JSON overrides")->check(CLI::ExistingFile);
    augment->add_option("--audio-root", ag.audio_root);
    augment->add_option("--order", ag.order, "Comma-separated stage order");
    augment->add_option("--rate", ag.rate);
    augment->add_option("--seed", ag.seed)->required();
    augment->callback([&] { action = [&] { return cmd_augment(ag, out); }; });

    PromptArgs pr;
    auto* prompt = app.add_subcommand("prompt", "Print a decoding prompt");
    prompt->add_option("--lang-tokens", pr.lang_tokens, "e.g. ca,es or ca or none");
    prompt->add_flag("--timestamps", pr.timestamps);
    prompt->add_option("--previous-text", pr.previous_text);
    prompt->add_flag("--json", pr.as_json, "Print the token list");
    prompt->callback([&] { action = [&] { return cmd_prompt(pr, out); }; });

    TranscribeArgs tr;
    auto* transcribe = app.add_subcommand("transcribe", "Send a manifest to the ASR service");
    transcribe->add_option("--in", tr.in)->required()->check(CLI::ExistingFile);
    transcribe->add_option("--asr-endpoint", tr.endpoint, "ASR service URL (or CS_FORGE_ASR_URL)");
    transcribe->add_option("--lang-tokens", tr.lang_tokens);
    transcribe->add_option("--model-id", tr.model_id);
    transcribe->add_option("--audio-root", tr.audio_root);
    transcribe->add_option("--max-in-flight", tr.max_in_flight)->check(CLI::PositiveNumber);
    transcribe->add_option("--out", tr.out, "Hypothesis file")->required();
    transcribe->callback([&] { action = [&] { return cmd_transcribe(tr, out); }; });

    EvalArgs ev;
    auto* eval = app.add_subcommand("eval", "Score hypotheses against references");
    eval->add_option("--refs", ev.refs)->required()->check(CLI::ExistingFile);
    eval->add_option("--hyps", ev.hyps)->required()->check(CLI::ExistingFile);
    eval->add_option("--report", ev.report)->check(CLI::IsMember({"table", "lines"}));
    eval->add_option("--experiment", ev.experiment)->check(CLI::IsMember({"base", "synthetic", "tv3", "tuples"}));
    eval->add_option("--dataset", ev.dataset);
    eval->add_option("--lang-tokens", ev.lang_tokens, "Decoding tokens used, e.g. ca,es");
    eval->add_flag("--no-normalize", ev.no_normalize, "Compare whitespace-split words as is");
    eval->callback([&] { action = [&] { return cmd_eval(ev, out); }; });

    TableArgs tb;
    auto* table = app.add_subcommand("table", "Format a results file as a table");
    table->add_option("--records", tb.records)->required()->check(CLI::ExistingFile);
    table->add_option("--report", tb.report)->check(CLI::IsMember({"table", "lines"}));
    table->add_option("--best", tb.best, "Report the best configuration for a dataset");
    table->callback([&] { action = [&] { return cmd_table(tb, out); }; });

    ReviewArgs rv;
    auto* serve = app.add_subcommand("review-serve", "Serve the review API");
    serve->add_option("--candidates", rv.candidates)->required()->check(CLI::ExistingFile);
    serve->add_option("--log", rv.log, "Decision log (default <candidates>.decisions.jsonl)");
    serve->add_option("--audio-root", rv.audio_root)->check(CLI::ExistingDirectory);
    serve->add_option("--ui-dir", rv.ui_dir)->check(CLI::ExistingDirectory);
    serve->add_option("--host", rv.host);
    serve->add_option("--port", rv.port, "Default CS_FORGE_PORT or 8787")->check(CLI::Range(0, 65535));
    serve->callback([&] { action = [&] { return cmd_review_serve(rv, out); }; });

    ReviewArgs ex;
    auto* exp = app.add_subcommand("export", "Write accepted candidates as a manifest");
    exp->add_option("--candidates", ex.candidates)->required()->check(CLI::ExistingFile);
    exp->add_option("--log", ex.log);
    exp->add_option("--out", ex.out)->required();
    exp->callback([&] { action = [&] { return cmd_export(ex, out); }; });

    std::string ng_dir, ng_out;
    auto* ngrams = app.add_subcommand("lexicon-ngrams", "Estimate n-gram weights from a lexicon");
    ngrams->add_option("--lexicon-dir", ng_dir)->required()->check(CLI::ExistingDirectory);
    ngrams->add_option("--out", ng_out)->required();
    ngrams->callback([&] { action = [&] { return cmd_lexicon_ngrams(ng_dir, ng_out, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action ? action() : kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitPipeline;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitPipeline;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace csforge::cli
