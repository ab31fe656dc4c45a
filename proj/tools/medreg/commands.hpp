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

#pragma once

#include "../support/cli.hpp"

namespace sda::medreg_cli {

/// Registers `serve`, `principal add`, `amend`, `audit` and `history-import` (master-db side).
void add_server_commands(CLI::App& app);

/// Registers the physician/registrar commands that talk to the facade and keep the light-db.
void add_desk_commands(CLI::App& app);

/// The body of whichever subcommand was parsed.
[[nodiscard]] int run_parsed(CLI::App& app);

using Runner = std::function<int()>;
/// Associates `cmd` with its body.
void on_run(CLI::App* cmd, Runner body);

} // namespace sda::medreg_cli
