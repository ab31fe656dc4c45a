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
 * @file platform.hpp
 * @brief The document platform: authorization, dispatch, ports.
 */

#pragma once

#include "sda/platform/config.hpp"
#include "sda/platform/port_server.hpp"
#include "sda/platform/repository.hpp"
#include "sda/platform/role_map.hpp"
#include "sda/proto/envelope.hpp"

#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>

namespace sda::platform {

/// DENIED for authentication and authorization failures, ERROR otherwise.
[[nodiscard]] proto::Status status_for(errc code) noexcept;

class Platform {
public:
    /// Loads the role-set certificate and the data directory. Ports are not
    /// opened until start(). Throws error(startup).
    Platform(ServerConfig config, crypto::KeystoreSession platform_identity, Clock clock = system_clock());
    ~Platform();
    Platform(const Platform&) = delete;
    Platform& operator=(const Platform&) = delete;

    /// Opens every configured port. Throws error(startup) on bind failure.
    void start();
    void shutdown();

    /// Full pipeline for one decoded command arriving on `port_name`.
    [[nodiscard]] proto::ResponseEnvelope handle(const proto::CommandEnvelope& env, const std::string& port_name);
    /// Same, starting from canonical command XML; decode failures become ERROR responses.
    [[nodiscard]] std::string handle_xml(std::string_view command_xml, const std::string& port_name);

    [[nodiscard]] proto::PlatformStatus status() const;
    /// Bound TCP port (resolves ephemeral ports). Throws error(unknown_port).
    [[nodiscard]] std::uint16_t port(const std::string& name) const;
    [[nodiscard]] const crypto::RoleCertificate& certificate() const noexcept {
        return identity_.certificate();
    }
    [[nodiscard]] const ServerConfig& config() const noexcept { return config_; }
    /// Store-integrity sweep; ids whose signatures no longer verify.
    [[nodiscard]] std::vector<std::string> audit() const;

private:
    struct Outcome {
        proto::Status status = proto::Status::ok;
        std::string code;
        xml::Element payload{"payload"};
    };

    [[nodiscard]] const PortConfig& port_config(const std::string& name) const;
    [[nodiscard]] Outcome execute(const proto::CommandEnvelope& env, const RoleEntry& role);
    [[nodiscard]] Outcome control_port(const proto::CommandEnvelope& env);
    [[nodiscard]] proto::PlatformStatus status_locked() const;
    [[nodiscard]] proto::ResponseEnvelope respond(const std::string& nonce, Outcome out) const;
    [[nodiscard]] std::string error_frame(const error& e) const;
    void log(const std::string& port, const std::string& fp_prefix, std::string_view kind, const Outcome& out);
    void start_port_locked(const std::string& name);

    ServerConfig config_;
    crypto::KeystoreSession identity_;
    Clock clock_;
    Timestamp started_at_;

    mutable std::shared_mutex state_mutex_;
    RoleMap roles_;
    Repository repo_;
    proto::NonceCache nonces_;

    mutable std::mutex ports_mutex_;
    std::map<std::string, std::unique_ptr<PortServer>> running_;
    std::map<std::string, std::uint16_t> bound_ports_;

    std::mutex log_mutex_;
    std::ofstream log_;
};

} // namespace sda::platform
