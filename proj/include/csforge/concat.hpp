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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csforge/audio.hpp"
#include "csforge/corpus.hpp"

namespace csforge {

enum class TupleOrder { ca_es, es_ca };

std::string_view to_string(TupleOrder o);

struct TuplePlan {
    Manifest ca_pool;
    Manifest es_pool;
    double gap_s = 0.0;
    std::uint64_t seed = 0;
    bool balance_gender = true;
};

struct TupleEntry {
    TupleOrder order = TupleOrder::ca_es;
    std::string ca_id;
    std::string es_id;

    bool operator==(const TupleEntry&) const = default;
};

struct TuplePair {
    std::string id;
    TupleOrder order = TupleOrder::ca_es;
    Utterance first;
    Utterance second;
    std::string merged_text;
    std::string merged_audio_path;
    double duration_s = 0.0;
};

// Pairs every Catalan clip with a distinct Spanish clip. The larger pool is
// truncated (after its seeded shuffle) when sizes differ. Of n tuples,
// ceil(n/2) are ca_es and floor(n/2) es_ca. With balance_gender, each
// language's clips are spread over the two orders per gender, so a gender's
// count in ca_es and es_ca differs by at most one.
std::vector<TupleEntry> plan_tuples(const TuplePlan& plan);

struct MaterializeOptions {
    std::filesystem::path ca_audio_root;
    std::filesystem::path es_audio_root;
    std::filesystem::path out_dir;
    int sample_rate = kCanonicalRate;
};

// Reads both clips, resamples to opts.sample_rate, writes
// first ++ silence(gap_s) ++ second to out_dir/<id>.wav.
TuplePair materialize_tuple(const TupleEntry& entry, const Utterance& ca, const Utterance& es, double gap_s,
                            const MaterializeOptions& opts);

std::string tuple_id(const TupleEntry& entry);

double total_duration_hours(std::span<const TuplePair> tuples);

nlohmann::json to_json(const TuplePair& t);

} // namespace csforge
