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
 * @file socket.hpp
 * @brief Minimal RAII wrappers over POSIX TCP sockets.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace sda::proto {

class Socket {
public:
    Socket() = default;
    explicit Socket(int fd) noexcept : fd_(fd) {}
    Socket(Socket&& other) noexcept : fd_(std::exchange(other.fd_, -1)) {}
    Socket& operator=(Socket&& other) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket() { close(); }

    [[nodiscard]] int fd() const noexcept { return fd_; }
    [[nodiscard]] bool valid() const noexcept { return fd_ >= 0; }
    void close() noexcept;
    /// Wakes a thread blocked in accept/recv on this socket.
    void shutdown() noexcept;

    /// Throws error(unreachable).
    [[nodiscard]] static Socket connect(const std::string& host, std::uint16_t port);

    void write_all(std::string_view data);
    /// Reads exactly n bytes; std::nullopt on clean EOF before the first byte.
    [[nodiscard]] std::optional<std::string> read_exact(std::size_t n);

private:
    int fd_ = -1;
};

class Listener {
public:
    /// Binds and listens. Port 0 picks an ephemeral port. Throws error(startup).
    Listener(const std::string& host, std::uint16_t port);

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }
    /// Blocks; returns an invalid socket once the listener was shut down.
    [[nodiscard]] Socket accept();
    void shutdown() noexcept { socket_.shutdown(); }

private:
    Socket socket_;
    std::uint16_t port_ = 0;
};

/// Writes one length-prefixed frame.
void write_frame(Socket& s, std::string_view payload);
/// Reads one frame payload; std::nullopt on clean EOF. Oversize headers
/// throw error(oversize_frame) before the payload is read.
[[nodiscard]] std::optional<std::string> read_frame(Socket& s, std::size_t max_bytes);

} // namespace sda::proto
