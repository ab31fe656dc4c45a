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

#include "sda/platform/port_server.hpp"

#include "sda/common/error.hpp"

namespace sda::platform {

PortServer::PortServer(std::string host, std::uint16_t port, std::size_t max_frame_bytes, FrameHandler handler,
                       FrameErrorHandler on_error)
    : listener_(std::make_unique<proto::Listener>(host, port)),
      port_(listener_->port()),
      max_frame_bytes_(max_frame_bytes),
      handler_(std::move(handler)),
      on_error_(std::move(on_error)) {
    acceptor_ = std::thread([this] { accept_loop(); });
}

PortServer::~PortServer() { stop(); }

void PortServer::accept_loop() {
    for (;;) {
        auto s = listener_->accept();
        std::lock_guard lock(mutex_);
        if (!s.valid() || stopping_) return;
        reap();
        auto& c = connections_.emplace_back();
        c.socket = std::move(s);
        c.thread = std::thread([this, &c] { serve(c); });
    }
}

void PortServer::serve(Connection& c) {
    try {
        for (;;) {
            std::optional<std::string> request;
            try {
                request = proto::read_frame(c.socket, max_frame_bytes_);
            } catch (const error& e) {
                // The stream cannot be resynchronized after a bad header.
                if (e.code() != errc::unreachable) proto::write_frame(c.socket, on_error_(e));
                break;
            }
            if (!request) break;
            proto::write_frame(c.socket, handler_(*request));
        }
    } catch (const std::exception&) {
        // Peer went away mid-write.
    }
    std::lock_guard lock(mutex_);
    c.socket.shutdown();
    c.done = true;
}

void PortServer::reap() {
    for (auto it = connections_.begin(); it != connections_.end();) {
        if (it->done) {
            it->thread.join();
            it = connections_.erase(it);
        } else {
            ++it;
        }
    }
}

void PortServer::stop() {
    {
        std::lock_guard lock(mutex_);
        if (stopping_) return;
        stopping_ = true;
        listener_->shutdown();
        for (auto& c : connections_) {
            c.socket.shutdown();
        }
    }
    if (acceptor_.joinable()) acceptor_.join();
    for (auto& c : connections_) {
        if (c.thread.joinable()) c.thread.join();
    }
    connections_.clear();
    listener_.reset();
}

} // namespace sda::platform
