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
 * @file config.hpp
 * @brief Platform configuration file (<server-config>).
 */

#pragma once

#include "sda/proto/command.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sda::platform {

inline constexpr std::string_view kAdministrationPort = "administration";

enum class Visibility { local, external };

struct PortConfig {
    std::string name;  ///< scenario, service or administration
    std::uint16_t tcp_port = 0;
    std::optional<std::set<proto::CommandKind>> allowed_kinds;  ///< nullopt = every kind
    Visibility visibility = Visibility::local;

    [[nodiscard]] bool is_administration() const { return name == kAdministrationPort; }
    [[nodiscard]] std::string bind_address() const {
        return visibility == Visibility::local ? "127.0.0.1" : "0.0.0.0";
    }
};

struct ServerConfig {
    std::vector<PortConfig> ports;
    std::filesystem::path role_set_certificate;
    std::filesystem::path platform_keystore;
    std::string platform_pin;
    std::filesystem::path data_dir;
    std::string db_connection;
    std::filesystem::path log_path;  ///< empty disables the command log
    std::chrono::seconds replay_window{300};
    std::size_t max_frame_bytes = 4u << 20;
    std::map<std::string, std::string> static_attributes;
};

[[nodiscard]] std::string_view to_string(Visibility v) noexcept;

/// Structural checks: known port names, exactly one administration port,
/// administration is local, distinct non-zero TCP ports. Throws error(startup).
void check_config(const ServerConfig& config);

/// Reads the XML file. Relative paths resolve against the file's directory.
/// SDA_DATA_DIR overrides data-dir; SDA_PLATFORM_PIN supplies a missing PIN.
/// Throws error(startup).
[[nodiscard]] ServerConfig load_config(const std::filesystem::path& path);

[[nodiscard]] std::string config_to_xml(const ServerConfig& config);

} // namespace sda::platform
