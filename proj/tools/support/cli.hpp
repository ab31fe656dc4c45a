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

/**
 * @file cli.hpp
 * @brief Pieces every command-line tool shares: PIN entry, platform
 *        connection options, review prompts and the exit-code policy.
 *
 * Exit codes: 0 success, 1 the server refused (DENIED/ERROR reply, printed
 * verbatim), 2 local or usage error.
 */

#pragma once

#include "sda/client/client.hpp"
#include "sda/client/wysiwys.hpp"

#include <CLI11.hpp>

#include <functional>
#include <optional>
#include <string>

namespace sda::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefused = 1;
inline constexpr int kExitLocal = 2;

/// `env_var` first, then the terminal with echo off, then one line of stdin.
[[nodiscard]] std::string read_pin(const std::string& prompt, const char* env_var = "SDA_PIN");

/// One line from the terminal (or stdin), without the newline.
[[nodiscard]] std::string read_line(const std::string& prompt);

[[nodiscard]] bool stdin_is_terminal();

struct Connection {
    std::string platform;  ///< host:port
    std::string gateway;   ///< http://host:port
    std::string keystore;
    std::string platform_cert;
};

void add_connection_options(CLI::App& app, Connection& c, bool keystore_required = true);

[[nodiscard]] std::unique_ptr<proto::Transport> open_transport(const Connection& c);

/// Loads the keystore, asks for its PIN (SDA_PIN) and opens a signed channel.
[[nodiscard]] client::Client open_client(const Connection& c);

/// Client for an explicit keystore file and PIN source.
[[nodiscard]] client::Client open_client(const Connection& c, const std::string& keystore_path,
                                         const std::string& pin);

/// "host:port"; throws error(malformed).
[[nodiscard]] std::pair<std::string, std::uint16_t> split_host_port(const std::string& text);

/// "k=v" pairs; throws error(malformed).
[[nodiscard]] std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& items);

/// Prints the view and asks for the confirmation code; `assume_yes` skips the question.
[[nodiscard]] bool review(const edoc::RenderedView& view, bool assume_yes);

/// "DENIED/CODE: detail" on stderr.
void report_refusal(const std::string& verbatim, const std::string& detail);

/// Runs `body`, mapping exceptions to a diagnostic on stderr and an exit code.
[[nodiscard]] int guarded(const std::function<int()>& body);

/// Parses argv; returns an exit code when the program should stop (help, usage error).
[[nodiscard]] std::optional<int> parse(CLI::App& app, int argc, char** argv);

} // namespace sda::cli
