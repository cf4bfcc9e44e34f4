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

#include "csforge/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "csforge/error.hpp"

namespace csforge {
namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

std::uint16_t le16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) { out.insert(out.end(), tag, tag + 4); }

} // namespace

AudioBuffer decode_wav(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 12) throw ParseError("truncated WAV: missing RIFF header");
    if (std::memcmp(bytes.data(), "RIFF", 4) != 0 || std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
        throw UnsupportedFormat("not a RIFF/WAVE file");
    }

    bool have_fmt = false;
    std::uint16_t channels = 0;
    std::uint32_t rate = 0;
    std::uint16_t bits = 0;
    std::size_t pos = 12;
    while (pos + 8 <= bytes.size()) {
        const std::uint8_t* chunk = bytes.data() + pos;
        const std::uint32_t chunk_size = le32(chunk + 4);
        const std::size_t body = pos + 8;
        if (std::memcmp(chunk, "fmt ", 4) == 0) {
            if (chunk_size < 16 || body + 16 > bytes.size()) throw ParseError("truncated WAV: short fmt chunk");
            std::uint16_t format = le16(bytes.data() + body);
            channels = le16(bytes.data() + body + 2);
            rate = le32(bytes.data() + body + 4);
            bits = le16(bytes.data() + body + 14);
            if (format == kFormatExtensible) {
                if (chunk_size < 40 || body + 26 > bytes.size()) throw ParseError("truncated WAV: short extensible fmt");
                format = le16(bytes.data() + body + 24); // first two bytes of the subformat GUID
            }
            if (format != kFormatPcm) {
                throw UnsupportedFormat("unsupported WAV encoding (format tag " + std::to_string(format) +
                                        "); only PCM is supported");
            }
            if (bits != 16) throw UnsupportedFormat("unsupported bit depth " + std::to_string(bits) + "; expected 16");
            if (channels != 1 && channels != 2) {
                throw UnsupportedFormat("unsupported channel count " + std::to_string(channels));
            }
            if (rate == 0) throw ParseError("WAV sample rate is zero");
            have_fmt = true;
        } else if (std::memcmp(chunk, "data", 4) == 0) {
            if (!have_fmt) throw ParseError("WAV data chunk precedes fmt chunk");
            if (body + chunk_size > bytes.size()) throw ParseError("truncated WAV: data chunk shorter than declared");
            const std::size_t frame_bytes = 2u * channels;
            if (chunk_size % frame_bytes != 0) throw ParseError("truncated WAV: partial sample frame");
            const std::size_t frames = chunk_size / frame_bytes;
            AudioBuffer buf;
            buf.sample_rate = static_cast<int>(rate);
            buf.samples.resize(frames);
            const std::uint8_t* p = bytes.data() + body;
            for (std::size_t i = 0; i < frames; ++i) {
                double acc = 0.0;
                for (std::uint16_t ch = 0; ch < channels; ++ch) {
                    acc += decode_sample(static_cast<std::int16_t>(le16(p)));
                    p += 2;
                }
                buf.samples[i] = acc / channels;
            }
            return buf;
        }
        pos = body + chunk_size + (chunk_size & 1u);
    }
    throw ParseError(have_fmt ? "truncated WAV: no data chunk" : "truncated WAV: no fmt chunk");
}

AudioBuffer read_wav(const std::filesystem::path& path) {
    const auto bytes = read_file_bytes(path);
    try {
        return decode_wav(bytes);
    } catch (const UnsupportedFormat& e) {
        throw UnsupportedFormat(path.string() + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::int16_t encode_sample(double s) {
    if (!std::isfinite(s) || s < -1.0 || s > 1.0) {
        throw InvalidArgument("sample " + std::to_string(s) + " outside [-1, 1]");
    }
    const double v = std::round(s * 32767.0);
    return static_cast<std::int16_t>(std::clamp(v, -32768.0, 32767.0));
}

std::vector<std::uint8_t> encode_wav(const AudioBuffer& buf) {
    if (buf.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
    const auto data_bytes = static_cast<std::uint32_t>(buf.samples.size() * 2);
    std::vector<std::uint8_t> out;
    out.reserve(44 + data_bytes);
    put_tag(out, "RIFF");
    put32(out, 36 + data_bytes);
    put_tag(out, "WAVE");
    put_tag(out, "fmt ");
    put32(out, 16);
    put16(out, kFormatPcm);
    put16(out, 1);
    put32(out, static_cast<std::uint32_t>(buf.sample_rate));
    put32(out, static_cast<std::uint32_t>(buf.sample_rate) * 2);
    put16(out, 2);
    put16(out, 16);
    put_tag(out, "data");
    put32(out, data_bytes);
    for (const double s : buf.samples) put16(out, static_cast<std::uint16_t>(encode_sample(s)));
    return out;
}

void write_wav(const AudioBuffer& buf, const std::filesystem::path& path) {
    write_file_bytes(path, encode_wav(buf));
}

AudioBuffer resample_linear(const AudioBuffer& buf, int target_rate) {
    if (target_rate <= 0) throw InvalidArgument("target rate must be positive");
    if (buf.sample_rate <= 0) throw InvalidArgument("source rate must be positive");
    if (target_rate == buf.sample_rate) return buf;

    AudioBuffer out;
    out.sample_rate = target_rate;
    const std::size_t n_in = buf.samples.size();
    const auto n_out = static_cast<std::size_t>(
        std::llround(static_cast<double>(n_in) * target_rate / static_cast<double>(buf.sample_rate)));
    if (n_in == 0 || n_out == 0) return out;
    out.samples.resize(n_out);
    if (n_out == 1 || n_in == 1) {
        std::fill(out.samples.begin(), out.samples.end(), buf.samples.front());
        return out;
    }
    const double step = static_cast<double>(n_in - 1) / static_cast<double>(n_out - 1);
    for (std::size_t j = 0; j < n_out; ++j) {
        const double x = static_cast<double>(j) * step;
        auto i = static_cast<std::size_t>(x);
        if (i >= n_in - 1) {
            out.samples[j] = buf.samples[n_in - 1];
            continue;
        }
        const double frac = x - static_cast<double>(i);
        const double a = buf.samples[i];
        const double b = buf.samples[i + 1];
        out.samples[j] = a + (b - a) * frac;
    }
    return out;
}

double rms(std::span<const double> samples) {
    if (samples.empty()) throw InvalidArgument("rms of an empty buffer");
    long double acc = 0.0L;
    for (const double s : samples) acc += static_cast<long double>(s) * s;
    return static_cast<double>(std::sqrt(acc / samples.size()));
}

double rms(const AudioBuffer& buf) { return rms(buf.samples); }

double rms_db(std::span<const double> samples) {
    const double r = rms(samples);
    if (r == 0.0) throw SilentSignalError("rms_db of a silent signal is undefined");
    return 20.0 * std::log10(r);
}

double rms_db(const AudioBuffer& buf) { return rms_db(buf.samples); }

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace csforge
