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
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace csforge {

// Seeded generator with portable distributions. std::mt19937_64 is fully
// specified by the standard; the std distributions are not, so index, real
// and shuffle draws are done here to keep artifacts byte-identical across
// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n). n must be positive.
    std::size_t uniform_index(std::size_t n);

    // Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();

    // Uniform in [lo, hi]; returns lo exactly when lo == hi.
    double uniform(double lo, double hi);

    bool bernoulli(double p) { return uniform01() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[uniform_index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Derive an independent seed for one item (utterance id, sentence id).
std::uint64_t mix_seed(std::uint64_t seed, std::string_view key);

} // namespace csforge
