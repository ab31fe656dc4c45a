/*
 * Copyright 2026 The SDA Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "commands.hpp"

#include <map>

namespace sda::medreg_cli {

namespace {

std::map<const CLI::App*, Runner>& runners() {
    static std::map<const CLI::App*, Runner> table;
    return table;
}

} // namespace

void on_run(CLI::App* cmd, Runner body) { runners()[cmd] = std::move(body); }

int run_parsed(CLI::App& app) {
    const CLI::App* node = &app;
    for (;;) {
        auto subs = node->get_subcommands();
        if (subs.empty()) break;
        node = subs.front();
    }
    auto it = runners().find(node);
    if (it == runners().end()) throw error(errc::malformed, "incomplete command; see --help");
    return it->second();
}

} // namespace sda::medreg_cli
