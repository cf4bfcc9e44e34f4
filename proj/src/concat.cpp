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

#include "csforge/concat.hpp"

#include <algorithm>
#include <cmath>

#include "csforge/error.hpp"
#include "csforge/log.hpp"
#include "csforge/random.hpp"

namespace csforge {

std::string_view to_string(TupleOrder o) { return o == TupleOrder::ca_es ? "ca_es" : "es_ca"; }

namespace {

struct Clip {
    std::string id;
    Gender gender;
};

std::vector<Clip> shuffled_clips(const Manifest& pool, Rng& rng) {
    std::vector<Clip> clips;
    clips.reserve(pool.size());
    for (const auto& u : pool.entries) clips.push_back({u.id, u.gender});
    rng.shuffle(clips);
    return clips;
}

int gender_rank(Gender g) {
    switch (g) {
    case Gender::male: return 0;
    case Gender::female: return 1;
    case Gender::unspecified: return 2;
    }
    return 2;
}

// Deals clips alternately into the ca_es / es_ca groups. Grouping by gender
// first makes each gender alternate too.
std::pair<std::vector<std::string>, std::vector<std::string>> deal(std::vector<Clip> clips, bool by_gender,
                                                                   Rng& rng) {
    if (by_gender) {
        std::stable_sort(clips.begin(), clips.end(),
                         [](const Clip& a, const Clip& b) { return gender_rank(a.gender) < gender_rank(b.gender); });
    }
    std::vector<std::string> first;
    std::vector<std::string> second;
    for (std::size_t i = 0; i < clips.size(); ++i) (i % 2 == 0 ? first : second).push_back(clips[i].id);
    // Re-shuffle inside each group so the gender ordering does not leak into
    // which Catalan clip meets which Spanish clip.
    rng.shuffle(first);
    rng.shuffle(second);
    return {std::move(first), std::move(second)};
}

std::string sanitize(std::string_view s) {
    std::string out;
    for (const char c : s) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                        c == '_' || c == '.';
        out.push_back(ok ? c : '_');
    }
    return out;
}

} // namespace

std::vector<TupleEntry> plan_tuples(const TuplePlan& plan) {
    if (plan.ca_pool.empty() || plan.es_pool.empty()) throw InvalidArgument("tuple pools must be nonempty");
    if (!(plan.gap_s >= 0.0) || !std::isfinite(plan.gap_s)) throw InvalidArgument("gap_s must be >= 0");

    Rng rng(plan.seed);
    auto ca = shuffled_clips(plan.ca_pool, rng);
    auto es = shuffled_clips(plan.es_pool, rng);
    const std::size_t n = std::min(ca.size(), es.size());
    if (ca.size() != es.size()) {
        log::warning("pool sizes differ (ca=" + std::to_string(ca.size()) + ", es=" + std::to_string(es.size()) +
                     "); truncating the larger pool to " + std::to_string(n));
        ca.resize(n);
        es.resize(n);
    }
    if (plan.balance_gender) {
        const auto unspecified = std::count_if(ca.begin(), ca.end(), [](const Clip& c) {
                                     return c.gender == Gender::unspecified;
                                 }) +
                                 std::count_if(es.begin(), es.end(),
                                               [](const Clip& c) { return c.gender == Gender::unspecified; });
        if (unspecified > 0) {
            log::warning(std::to_string(unspecified) + " clips have unspecified gender; they are balanced as a third group");
        }
    }

    auto [ca_first, ca_second] = deal(std::move(ca), plan.balance_gender, rng);
    auto [es_first, es_second] = deal(std::move(es), plan.balance_gender, rng);

    std::vector<TupleEntry> out;
    out.reserve(n);
    for (std::size_t i = 0; i < ca_first.size() || i < ca_second.size(); ++i) {
        if (i < ca_first.size()) out.push_back({TupleOrder::ca_es, ca_first[i], es_first[i]});
        if (i < ca_second.size()) out.push_back({TupleOrder::es_ca, ca_second[i], es_second[i]});
    }
    return out;
}

std::string tuple_id(const TupleEntry& entry) {
    const auto& first = entry.order == TupleOrder::ca_es ? entry.ca_id : entry.es_id;
    const auto& second = entry.order == TupleOrder::ca_es ? entry.es_id : entry.ca_id;
    return std::string(to_string(entry.order)) + "__" + sanitize(first) + "__" + sanitize(second);
}

namespace {

AudioBuffer load_clip(const Utterance& u, const std::filesystem::path& root, int rate) {
    if (!u.audio_path) throw IoError("utterance " + u.id + " has no audio_path");
    return resample_linear(read_wav(root / *u.audio_path), rate);
}

} // namespace

TuplePair materialize_tuple(const TupleEntry& entry, const Utterance& ca, const Utterance& es, double gap_s,
                            const MaterializeOptions& opts) {
    if (ca.id != entry.ca_id || es.id != entry.es_id) throw InvalidArgument("utterances do not match tuple entry");
    if (!(gap_s >= 0.0)) throw InvalidArgument("gap_s must be >= 0");

    const bool ca_first = entry.order == TupleOrder::ca_es;
    const Utterance& first = ca_first ? ca : es;
    const Utterance& second = ca_first ? es : ca;
    const auto& first_root = ca_first ? opts.ca_audio_root : opts.es_audio_root;
    const auto& second_root = ca_first ? opts.es_audio_root : opts.ca_audio_root;

    const auto a = load_clip(first, first_root, opts.sample_rate);
    const auto b = load_clip(second, second_root, opts.sample_rate);
    const auto gap = static_cast<std::size_t>(std::llround(gap_s * opts.sample_rate));

    AudioBuffer merged;
    merged.sample_rate = opts.sample_rate;
    merged.samples.reserve(a.size() + gap + b.size());
    merged.samples.insert(merged.samples.end(), a.samples.begin(), a.samples.end());
    merged.samples.insert(merged.samples.end(), gap, 0.0);
    merged.samples.insert(merged.samples.end(), b.samples.begin(), b.samples.end());

    TuplePair t;
    t.id = tuple_id(entry);
    t.order = entry.order;
    t.first = first;
    t.second = second;
    t.merged_text = first.text + " " + second.text;
    t.merged_audio_path = t.id + ".wav";
    t.duration_s = merged.duration_s();
    write_wav(merged, opts.out_dir / t.merged_audio_path);
    return t;
}

double total_duration_hours(std::span<const TuplePair> tuples) {
    double total = 0.0;
    for (const auto& t : tuples) total += t.duration_s;
    return total / 3600.0;
}

nlohmann::json to_json(const TuplePair& t) {
    return {
        {"id", t.id},
        {"audio_path", t.merged_audio_path},
        {"text", t.merged_text},
        {"lang", "mixed"},
        {"gender", "unspecified"},
        {"duration_s", t.duration_s},
        {"order", to_string(t.order)},
        {"first_id", t.first.id},
        {"second_id", t.second.id},
        {"first_lang", to_string(t.first.lang)},
        {"second_lang", to_string(t.second.lang)},
        {"first_gender", to_string(t.first.gender)},
        {"second_gender", to_string(t.second.gender)},
    };
}

} // namespace csforge
