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

#include "csforge/augment.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "csforge/error.hpp"
#include "csforge/random.hpp"

namespace csforge {

using nlohmann::json;

std::string_view to_string(AugmentStage s) {
    switch (s) {
    case AugmentStage::noise: return "noise";
    case AugmentStage::clip: return "clip";
    case AugmentStage::tanh: return "tanh";
    case AugmentStage::gain_transition: return "gain_transition";
    case AugmentStage::bitcrush: return "bitcrush";
    }
    return "noise";
}

AugmentStage parse_augment_stage(std::string_view s) {
    for (auto st : {AugmentStage::noise, AugmentStage::clip, AugmentStage::tanh, AugmentStage::gain_transition,
                    AugmentStage::bitcrush}) {
        if (to_string(st) == s) return st;
    }
    throw InvalidArgument("unknown augmentation stage \"" + std::string(s) + "\"");
}

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw InvalidArgument("augmentation config: " + what);
}

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

} // namespace

void AugmentationConfig::validate() const {
    require(is_probability(noise.p), "noise.p must lie in [0, 1]");
    require(noise.min_rms_db <= noise.max_rms_db, "noise.min_rms_db > noise.max_rms_db");
    require(std::isfinite(noise.min_rms_db) && std::isfinite(noise.max_rms_db), "noise levels must be finite");
    require(is_probability(clip.p), "clip.p must lie in [0, 1]");
    require(clip.a_min < clip.a_max, "clip.a_min must be < clip.a_max");
    require(is_probability(tanh.p), "tanh.p must lie in [0, 1]");
    require(tanh.min_distortion <= tanh.max_distortion, "tanh.min_distortion > tanh.max_distortion");
    require(tanh.min_distortion >= 0.0 && tanh.max_distortion <= 1.0, "tanh distortion must lie in [0, 1]");
    require(is_probability(gain_transition.p), "gain_transition.p must lie in [0, 1]");
    require(gain_transition.min_gain_db <= gain_transition.max_gain_db, "min_gain_db > max_gain_db");
    require(gain_transition.min_duration_s <= gain_transition.max_duration_s, "min_duration_s > max_duration_s");
    require(gain_transition.min_duration_s > 0.0, "gain transition durations must be positive");
    require(is_probability(bitcrush.p), "bitcrush.p must lie in [0, 1]");
    require(bitcrush.min_bit_depth <= bitcrush.max_bit_depth, "min_bit_depth > max_bit_depth");
    require(bitcrush.min_bit_depth >= 1 && bitcrush.max_bit_depth <= 16, "bit depths must lie in [1, 16]");
    std::set<AugmentStage> seen(order.begin(), order.end());
    require(seen.size() == order.size(), "stage order contains duplicates");
}

namespace {

template <typename T>
void read_field(const json& obj, const char* section, const char* key, T& dst, std::set<std::string>& known) {
    known.insert(key);
    if (const auto it = obj.find(key); it != obj.end()) {
        try {
            dst = it->get<T>();
        } catch (const json::exception&) {
            throw InvalidArgument(std::string("augmentation config: bad value for ") + section + "." + key);
        }
    }
}

void reject_unknown(const json& obj, const char* section, const std::set<std::string>& known) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key)) {
            throw InvalidArgument(std::string("augmentation config: unknown key ") + section + "." + key);
        }
    }
}

const json& section(const json& j, const char* name) {
    static const json empty = json::object();
    const auto it = j.find(name);
    if (it == j.end()) return empty;
    if (!it->is_object()) throw InvalidArgument(std::string("augmentation config: ") + name + " must be an object");
    return *it;
}

} // namespace

AugmentationConfig config_from_json(const json& j, AugmentationConfig cfg) {
    if (!j.is_object()) throw InvalidArgument("augmentation config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        static const std::set<std::string> top{"noise", "clip", "tanh", "gain_transition", "bitcrush", "seed", "order"};
        if (!top.contains(key)) throw InvalidArgument("augmentation config: unknown key " + key);
    }
    {
        const auto& s = section(j, "noise");
        std::set<std::string> known;
        read_field(s, "noise", "min_rms_db", cfg.noise.min_rms_db, known);
        read_field(s, "noise", "max_rms_db", cfg.noise.max_rms_db, known);
        read_field(s, "noise", "p", cfg.noise.p, known);
        read_field(s, "noise", "noise_bank", cfg.noise.noise_bank, known);
        reject_unknown(s, "noise", known);
    }
    {
        const auto& s = section(j, "clip");
        std::set<std::string> known;
        read_field(s, "clip", "a_min", cfg.clip.a_min, known);
        read_field(s, "clip", "a_max", cfg.clip.a_max, known);
        read_field(s, "clip", "p", cfg.clip.p, known);
        reject_unknown(s, "clip", known);
    }
    {
        const auto& s = section(j, "tanh");
        std::set<std::string> known;
        read_field(s, "tanh", "min_distortion", cfg.tanh.min_distortion, known);
        read_field(s, "tanh", "max_distortion", cfg.tanh.max_distortion, known);
        read_field(s, "tanh", "p", cfg.tanh.p, known);
        reject_unknown(s, "tanh", known);
    }
    {
        const auto& s = section(j, "gain_transition");
        std::set<std::string> known;
        read_field(s, "gain_transition", "min_gain_db", cfg.gain_transition.min_gain_db, known);
        read_field(s, "gain_transition", "max_gain_db", cfg.gain_transition.max_gain_db, known);
        read_field(s, "gain_transition", "min_duration_s", cfg.gain_transition.min_duration_s, known);
        read_field(s, "gain_transition", "max_duration_s", cfg.gain_transition.max_duration_s, known);
        read_field(s, "gain_transition", "p", cfg.gain_transition.p, known);
        reject_unknown(s, "gain_transition", known);
    }
    {
        const auto& s = section(j, "bitcrush");
        std::set<std::string> known;
        read_field(s, "bitcrush", "min_bit_depth", cfg.bitcrush.min_bit_depth, known);
        read_field(s, "bitcrush", "max_bit_depth", cfg.bitcrush.max_bit_depth, known);
        read_field(s, "bitcrush", "p", cfg.bitcrush.p, known);
        reject_unknown(s, "bitcrush", known);
    }
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("order")) {
        cfg.order.clear();
        for (const auto& s : j["order"]) cfg.order.push_back(parse_augment_stage(s.get<std::string>()));
    }
    cfg.validate();
    return cfg;
}

json to_json(const AugmentationConfig& cfg) {
    json order = json::array();
    for (auto s : cfg.order) order.push_back(to_string(s));
    return {
        {"noise",
         {{"min_rms_db", cfg.noise.min_rms_db},
          {"max_rms_db", cfg.noise.max_rms_db},
          {"p", cfg.noise.p},
          {"noise_bank", cfg.noise.noise_bank}}},
        {"clip", {{"a_min", cfg.clip.a_min}, {"a_max", cfg.clip.a_max}, {"p", cfg.clip.p}}},
        {"tanh",
         {{"min_distortion", cfg.tanh.min_distortion},
          {"max_distortion", cfg.tanh.max_distortion},
          {"p", cfg.tanh.p}}},
        {"gain_transition",
         {{"min_gain_db", cfg.gain_transition.min_gain_db},
          {"max_gain_db", cfg.gain_transition.max_gain_db},
          {"min_duration_s", cfg.gain_transition.min_duration_s},
          {"max_duration_s", cfg.gain_transition.max_duration_s},
          {"p", cfg.gain_transition.p}}},
        {"bitcrush",
         {{"min_bit_depth", cfg.bitcrush.min_bit_depth},
          {"max_bit_depth", cfg.bitcrush.max_bit_depth},
          {"p", cfg.bitcrush.p}}},
        {"seed", cfg.seed},
        {"order", order},
    };
}

AudioBuffer add_noise(const AudioBuffer& x, const AudioBuffer& noise, double target_rms_db) {
    if (x.empty()) throw InvalidArgument("add_noise: empty signal");
    if (noise.empty()) throw InvalidArgument("add_noise: empty noise source");
    if (!std::isfinite(target_rms_db)) throw InvalidArgument("add_noise: target level must be finite");

    std::vector<double> tiled(x.size());
    for (std::size_t i = 0; i < tiled.size(); ++i) tiled[i] = noise.samples[i % noise.size()];
    const double noise_rms = rms(tiled);
    if (noise_rms == 0.0) throw SilentSignalError("add_noise: noise source is silent");

    const double gain = std::pow(10.0, target_rms_db / 20.0) / noise_rms;
    AudioBuffer out = x;
    for (std::size_t i = 0; i < out.size(); ++i) out.samples[i] += gain * tiled[i];
    return out;
}

AudioBuffer clip(const AudioBuffer& x, double a_min, double a_max) {
    if (!(a_min < a_max)) throw InvalidArgument("clip: a_min must be < a_max");
    AudioBuffer out = x;
    for (auto& s : out.samples) s = std::min(std::max(s, a_min), a_max);
    return out;
}

AudioBuffer tanh_distortion(const AudioBuffer& x, double distortion) {
    if (!(distortion >= 0.0 && distortion <= 1.0)) throw InvalidArgument("tanh_distortion: distortion outside [0, 1]");
    AudioBuffer out = x;
    if (x.empty()) return out;
    const double drive = tanh_drive(distortion);
    for (auto& s : out.samples) s = std::tanh(drive * s);
    const double in_rms = rms(x);
    const double out_rms = rms(out);
    if (out_rms > 0.0) {
        const double scale = in_rms / out_rms;
        for (auto& s : out.samples) s *= scale;
    }
    return out;
}

double gain_envelope_db(double t_s, double gain_db, double start_s, double duration_s) {
    const double progress = std::clamp((t_s - start_s) / duration_s, 0.0, 1.0);
    return gain_db * progress;
}

AudioBuffer gain_transition(const AudioBuffer& x, double gain_db, double start_s, double duration_s) {
    if (!(duration_s > 0.0)) throw InvalidArgument("gain_transition: duration must be positive");
    if (!(start_s >= 0.0) || start_s + duration_s > x.duration_s() + 1e-9) {
        throw InvalidArgument("gain_transition: window [" + std::to_string(start_s) + ", " +
                              std::to_string(start_s + duration_s) + "] s lies outside the " +
                              std::to_string(x.duration_s()) + " s signal");
    }
    AudioBuffer out = x;
    if (gain_db == 0.0) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = static_cast<double>(i) / x.sample_rate;
        out.samples[i] *= std::pow(10.0, gain_envelope_db(t, gain_db, start_s, duration_s) / 20.0);
    }
    return out;
}

AudioBuffer bitcrush(const AudioBuffer& x, int bit_depth) {
    if (bit_depth < 1 || bit_depth > 16) throw InvalidArgument("bitcrush: bit depth outside [1, 16]");
    const double q = std::ldexp(1.0, bit_depth - 1);
    AudioBuffer out = x;
    for (auto& s : out.samples) s = std::clamp(std::round(s * q) / q, -1.0, 1.0);
    return out;
}

json AppliedLog::to_json() const {
    json stages_json = json::array();
    for (const auto& s : stages) {
        stages_json.push_back(
            {{"stage", csforge::to_string(s.stage)}, {"applied", s.applied}, {"draw", s.draw}, {"params", s.params}});
    }
    return {{"seed", seed}, {"stages", stages_json}};
}

AugmentResult apply_chain(const AudioBuffer& x, const AugmentationConfig& cfg,
                          const std::vector<AudioBuffer>& noise_bank, const StageObserver& observer) {
    cfg.validate();
    if (x.empty()) throw InvalidArgument("apply_chain: empty signal");

    Rng rng(cfg.seed);
    AugmentResult result;
    result.log.seed = cfg.seed;
    AudioBuffer current = x;

    for (const auto stage : cfg.order) {
        StageRecord rec;
        rec.stage = stage;
        rec.draw = rng.uniform01();
        AudioBuffer next;
        // Parameters are drawn whether or not the stage fires so that the
        // generator stream does not depend on earlier skip decisions.
        switch (stage) {
        case AugmentStage::noise: {
            const auto& c = cfg.noise;
            const double target = rng.uniform(c.min_rms_db, c.max_rms_db);
            const std::size_t pick = noise_bank.empty() ? 0 : rng.uniform_index(noise_bank.size());
            rec.params = {{"target_rms_db", target}, {"noise_index", pick}};
            rec.applied = rec.draw < c.p;
            if (rec.applied) {
                if (noise_bank.empty()) throw InvalidArgument("apply_chain: noise stage enabled with an empty noise bank");
                next = add_noise(current, resample_linear(noise_bank[pick], current.sample_rate), target);
            }
            break;
        }
        case AugmentStage::clip: {
            rec.params = {{"a_min", cfg.clip.a_min}, {"a_max", cfg.clip.a_max}};
            rec.applied = rec.draw < cfg.clip.p;
            if (rec.applied) next = clip(current, cfg.clip.a_min, cfg.clip.a_max);
            break;
        }
        case AugmentStage::tanh: {
            const double distortion = rng.uniform(cfg.tanh.min_distortion, cfg.tanh.max_distortion);
            rec.params = {{"distortion", distortion}, {"drive", tanh_drive(distortion)}};
            rec.applied = rec.draw < cfg.tanh.p;
            if (rec.applied) next = tanh_distortion(current, distortion);
            break;
        }
        case AugmentStage::gain_transition: {
            const auto& c = cfg.gain_transition;
            const double gain_db = rng.uniform(c.min_gain_db, c.max_gain_db);
            double duration = rng.uniform(c.min_duration_s, c.max_duration_s);
            const double total = current.duration_s();
            duration = std::min(duration, total);
            const double start = rng.uniform(0.0, std::max(0.0, total - duration));
            rec.params = {{"gain_db", gain_db}, {"start_s", start}, {"duration_s", duration}};
            rec.applied = rec.draw < c.p && duration > 0.0;
            if (rec.applied) next = gain_transition(current, gain_db, start, duration);
            break;
        }
        case AugmentStage::bitcrush: {
            const auto& c = cfg.bitcrush;
            const int depth =
                c.min_bit_depth + static_cast<int>(rng.uniform_index(static_cast<std::size_t>(c.max_bit_depth - c.min_bit_depth + 1)));
            rec.params = {{"bit_depth", depth}};
            rec.applied = rec.draw < c.p;
            if (rec.applied) next = bitcrush(current, depth);
            break;
        }
        }
        rec.params["p"] = [&] {
            switch (stage) {
            case AugmentStage::noise: return cfg.noise.p;
            case AugmentStage::clip: return cfg.clip.p;
            case AugmentStage::tanh: return cfg.tanh.p;
            case AugmentStage::gain_transition: return cfg.gain_transition.p;
            case AugmentStage::bitcrush: return cfg.bitcrush.p;
            }
            return 0.0;
        }();
        if (rec.applied) {
            if (observer) observer(stage, current, next, rec);
            current = std::move(next);
        }
        result.log.stages.push_back(std::move(rec));
    }
    result.audio = std::move(current);
    return result;
}

AudioBuffer make_pseudo_noise(double seconds, int sample_rate, std::uint64_t seed) {
    if (!(seconds > 0.0) || sample_rate <= 0) throw InvalidArgument("pseudo noise needs positive length and rate");
    Rng rng(seed);
    AudioBuffer out;
    out.sample_rate = sample_rate;
    out.samples.resize(static_cast<std::size_t>(std::llround(seconds * sample_rate)));
    for (auto& s : out.samples) s = rng.uniform(-0.5, 0.5);
    return out;
}

} // namespace csforge
