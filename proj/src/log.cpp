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

#include "csforge/log.hpp"

#include <iostream>
#include <mutex>

namespace csforge::log {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

void stderr_sink(Level level, std::string_view message) {
    std::cerr << (level == Level::warning ? "[warn] " : "[info] ") << message << '\n';
}

Sink& current_sink() {
    static Sink sink = stderr_sink;
    return sink;
}

void emit(Level level, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(level, message);
}

} // namespace

Sink set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    auto old = std::move(current_sink());
    current_sink() = sink ? std::move(sink) : Sink(stderr_sink);
    return old;
}

void info(std::string_view message) { emit(Level::info, message); }
void warning(std::string_view message) { emit(Level::warning, message); }

} // namespace csforge::log
