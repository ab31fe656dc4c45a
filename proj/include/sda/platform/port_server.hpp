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
 * @file port_server.hpp
 * @brief One TCP listener with a thread per connection.
 */

#pragma once

#include "sda/common/error.hpp"
#include "sda/proto/socket.hpp"

#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace sda::platform {

/// Maps a request frame payload to a response payload. Never throws.
using FrameHandler = std::function<std::string(std::string_view request)>;
/// Builds the response for a frame that could not be read (e.g. oversize).
using FrameErrorHandler = std::function<std::string(const error& e)>;

class PortServer {
public:
    PortServer(std::string host, std::uint16_t port, std::size_t max_frame_bytes, FrameHandler handler,
               FrameErrorHandler on_error);
    ~PortServer();
    PortServer(const PortServer&) = delete;
    PortServer& operator=(const PortServer&) = delete;

    [[nodiscard]] std::uint16_t port() const noexcept { return port_; }
    /// Closes the listener and every open connection, then joins all threads.
    void stop();

private:
    struct Connection {
        proto::Socket socket;
        std::thread thread;
        bool done = false;
    };

    void accept_loop();
    void serve(Connection& c);
    void reap();

    std::unique_ptr<proto::Listener> listener_;
    std::uint16_t port_;
    std::size_t max_frame_bytes_;
    FrameHandler handler_;
    FrameErrorHandler on_error_;
    std::mutex mutex_;
    std::list<Connection> connections_;
    bool stopping_ = false;
    std::thread acceptor_;
};

} // namespace sda::platform
