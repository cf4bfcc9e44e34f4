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
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "csforge/audio.hpp"

namespace csforge {

enum class AugmentStage { noise, clip, tanh, gain_transition, bitcrush };

std::string_view to_string(AugmentStage s);
AugmentStage parse_augment_stage(std::string_view s);

// Defaults reproduce the published pipeline: background noise at -45..-40 dB
// absolute RMS, hard clipping at +/-0.07, tanh distortion 0.3 on half the
// utterances, a +/-3 dB gain ramp lasting 0.5-1 s, and 8-bit crushing.
struct AugmentationConfig {
    struct Noise {
        double min_rms_db = -45.0;
        double max_rms_db = -40.0;
        double p = 1.0;
        std::vector<std::string> noise_bank; // WAV paths
    } noise;
    struct Clip {
        double a_min = -0.07;
        double a_max = 0.07;
        double p = 1.0;
    } clip;
    struct Tanh {
        double min_distortion = 0.3;
        double max_distortion = 0.3;
        double p = 0.5;
    } tanh;
    struct GainTransition {
        double min_gain_db = -3.0;
        double max_gain_db = 3.0;
        double min_duration_s = 0.5;
        double max_duration_s = 1.0;
        double p = 1.0;
    } gain_transition;
    struct Bitcrush {
        int min_bit_depth = 8;
        int max_bit_depth = 8;
        double p = 1.0;
    } bitcrush;
    std::uint64_t seed = 0;
    std::vector<AugmentStage> order{AugmentStage::noise, AugmentStage::clip, AugmentStage::tanh,
                                    AugmentStage::gain_transition, AugmentStage::bitcrush};

    // Throws InvalidArgument on any violated range.
    void validate() const;
};

// Applies every key present in `j` on top of `base`; unknown keys are errors.
AugmentationConfig config_from_json(const nlohmann::json& j, AugmentationConfig base = {});
nlohmann::json to_json(const AugmentationConfig& cfg);

// Tiles or trims `noise` to x's length and adds it with absolute RMS
// target_rms_db.
AudioBuffer add_noise(const AudioBuffer& x, const AudioBuffer& noise, double target_rms_db);
AudioBuffer clip(const AudioBuffer& x, double a_min, double a_max);

inline double tanh_drive(double distortion) { return 1.0 + 15.0 * distortion; }
// tanh(drive * x) rescaled back to the input RMS.
AudioBuffer tanh_distortion(const AudioBuffer& x, double distortion);

// Gain envelope in dB: 0 before start_s, linear to gain_db over duration_s,
// gain_db afterwards.
AudioBuffer gain_transition(const AudioBuffer& x, double gain_db, double start_s, double duration_s);
double gain_envelope_db(double t_s, double gain_db, double start_s, double duration_s);

// Mid-tread quantizer with 2^(bit_depth-1) steps per unit amplitude.
AudioBuffer bitcrush(const AudioBuffer& x, int bit_depth);

struct StageRecord {
    AugmentStage stage;
    bool applied = false;
    double draw = 0.0;                // Bernoulli draw compared against p
    nlohmann::json params = nlohmann::json::object();
};

struct AppliedLog {
    std::uint64_t seed = 0;
    std::vector<StageRecord> stages;

    nlohmann::json to_json() const;
};

struct AugmentResult {
    AudioBuffer audio;
    AppliedLog log;
};

// Called after each stage that ran, with the buffers around it.
using StageObserver = std::function<void(AugmentStage, const AudioBuffer& before, const AudioBuffer& after,
                                         const StageRecord&)>;

// Runs the configured stages in order, each gated by an independent
// Bernoulli(p) draw; ranged parameters are drawn uniformly. Noise sources come
// from `noise_bank`, one picked uniformly per call. Deterministic in
// (x, cfg, noise_bank).
AugmentResult apply_chain(const AudioBuffer& x, const AugmentationConfig& cfg,
                          const std::vector<AudioBuffer>& noise_bank, const StageObserver& observer = {});

// White-ish noise from a seeded generator, usable when no noise corpus is
// available.
AudioBuffer make_pseudo_noise(double seconds, int sample_rate, std::uint64_t seed);

} // namespace csforge
