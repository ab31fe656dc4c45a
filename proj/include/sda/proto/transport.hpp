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
 * @file transport.hpp
 * @brief Ways of carrying a command frame to the platform and the response back.
 */

#pragma once

#include "sda/proto/frame.hpp"

#include <cstdint>
#include <memory>
#include <string>

namespace sda::proto {

class Transport {
public:
    virtual ~Transport() = default;
    /// Sends canonical command XML, returns canonical response XML.
    [[nodiscard]] virtual std::string exchange(const std::string& command_xml) = 0;
    [[nodiscard]] virtual std::string describe() const = 0;
};

/// Direct connection to a platform port. Throws error(unreachable).
class TcpTransport final : public Transport {
public:
    TcpTransport(std::string host, std::uint16_t port, std::size_t max_frame_bytes = kDefaultMaxFrameBytes);
    [[nodiscard]] std::string exchange(const std::string& command_xml) override;
    [[nodiscard]] std::string describe() const override;

private:
    std::string host_;
    std::uint16_t port_;
    std::size_t max_frame_bytes_;
};

/// HTTP tunnel through a gateway. Throws error(gateway_unreachable) or
/// error(gateway_bad_response).
class GatewayTransport final : public Transport {
public:
    /// `url` like "http://127.0.0.1:8080".
    explicit GatewayTransport(std::string url);
    [[nodiscard]] std::string exchange(const std::string& command_xml) override;
    [[nodiscard]] std::string describe() const override { return url_; }

private:
    std::string url_;
};

/// "tcp://host:port" or "http://host:port".
[[nodiscard]] std::unique_ptr<Transport> make_transport(const std::string& address);

/// Encodes, exchanges, decodes. Does not check the response signature.
[[nodiscard]] ResponseEnvelope round_trip(Transport& transport, const CommandEnvelope& env);

inline constexpr std::string_view kGatewayContentType = "application/aida+xml";
inline constexpr std::string_view kGatewayPath = "/aida";

/// HTTP front that forwards each POSTed command to one platform port.
class Gateway {
public:
    Gateway(std::string upstream_host, std::uint16_t upstream_port,
            std::size_t max_frame_bytes = kDefaultMaxFrameBytes);
    ~Gateway();
    Gateway(const Gateway&) = delete;
    Gateway& operator=(const Gateway&) = delete;

    /// Binds (port 0 picks one) and serves on a background thread. Throws error(startup).
    std::uint16_t start(const std::string& host, std::uint16_t port);
    /// Blocks on the calling thread.
    void run(const std::string& host, std::uint16_t port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace sda::proto
