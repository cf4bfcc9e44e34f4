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
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csforge {

inline constexpr int kCanonicalRate = 16000;

// Mono PCM as doubles. Samples are finite; nominal range is [-1, 1] but
// intermediate augmentation stages may exceed it, and write_wav rejects
// anything outside.
struct AudioBuffer {
    std::vector<double> samples;
    int sample_rate = kCanonicalRate;

    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate; }
    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
    bool operator==(const AudioBuffer&) const = default;
};

// RIFF/WAVE PCM 16-bit, mono or stereo (stereo is averaged). Samples are
// scaled by 1/32768.
AudioBuffer decode_wav(std::span<const std::uint8_t> bytes);
AudioBuffer read_wav(const std::filesystem::path& path);

// PCM 16-bit mono little-endian; each sample encodes as round(s * 32767).
// Throws InvalidArgument for samples outside [-1, 1] or non-finite.
std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf);
void write_wav(const AudioBuffer& buf, const std::filesystem::path& path);

std::int16_t encode_sample(double s);
inline double decode_sample(std::int16_t v) { return static_cast<double>(v) / 32768.0; }

// Endpoint-aligned linear interpolation: output sample j sits at input
// position j * (n_in - 1) / (n_out - 1), with n_out = round(n_in * target / source).
AudioBuffer resample_linear(const AudioBuffer& buf, int target_rate);

double rms(std::span<const double> samples);
double rms(const AudioBuffer& buf);
// Throws SilentSignalError for an all-zero buffer.
double rms_db(std::span<const double> samples);
double rms_db(const AudioBuffer& buf);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

} // namespace csforge
