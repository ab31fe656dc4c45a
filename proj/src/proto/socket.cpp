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

#include "sda/proto/socket.hpp"

#include "sda/common/error.hpp"
#include "sda/proto/frame.hpp"

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <utility>

namespace sda::proto {

namespace {
std::string errno_text() { return std::strerror(errno); }
} // namespace

Socket& Socket::operator=(Socket&& other) noexcept {
    if (this != &other) {
        close();
        fd_ = std::exchange(other.fd_, -1);
    }
    return *this;
}

void Socket::close() noexcept {
    if (fd_ >= 0) {
        ::close(fd_);
        fd_ = -1;
    }
}

void Socket::shutdown() noexcept {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Socket Socket::connect(const std::string& host, std::uint16_t port) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    auto service = std::to_string(port);
    if (int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
        throw error(errc::unreachable, host + ": " + ::gai_strerror(rc));
    }
    std::string last = "no address";
    for (auto* a = found; a; a = a->ai_next) {
        Socket s{::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol)};
        if (!s.valid()) continue;
        if (::connect(s.fd(), a->ai_addr, a->ai_addrlen) == 0) {
            ::freeaddrinfo(found);
            int one = 1;
            ::setsockopt(s.fd(), IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return s;
        }
        last = errno_text();
    }
    ::freeaddrinfo(found);
    throw error(errc::unreachable, host + ":" + service + ": " + last);
}

void Socket::write_all(std::string_view data) {
    while (!data.empty()) {
        auto n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw error(errc::unreachable, "send: " + errno_text());
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

std::optional<std::string> Socket::read_exact(std::size_t n) {
    std::string out(n, '\0');
    std::size_t got = 0;
    while (got < n) {
        auto r = ::recv(fd_, out.data() + got, n - got, 0);
        if (r < 0) {
            if (errno == EINTR) continue;
            throw error(errc::unreachable, "recv: " + errno_text());
        }
        if (r == 0) {
            if (got == 0) return std::nullopt;
            throw error(errc::malformed, "connection closed mid-frame");
        }
        got += static_cast<std::size_t>(r);
    }
    return out;
}

Listener::Listener(const std::string& host, std::uint16_t port) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port);
    if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        throw error(errc::startup, "bad listen address " + host);
    }
    socket_ = Socket{::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0)};
    if (!socket_.valid()) throw error(errc::startup, "socket: " + errno_text());
    int one = 1;
    ::setsockopt(socket_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
        throw error(errc::startup, "bind " + host + ":" + std::to_string(port) + ": " + errno_text());
    }
    if (::listen(socket_.fd(), 64) != 0) throw error(errc::startup, "listen: " + errno_text());
    socklen_t len = sizeof addr;
    ::getsockname(socket_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);
}

Socket Listener::accept() {
    for (;;) {
        int fd = ::accept4(socket_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
        if (fd >= 0) {
            int one = 1;
            ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket{fd};
        }
        if (errno == EINTR || errno == ECONNABORTED) continue;
        return Socket{};
    }
}

void write_frame(Socket& s, std::string_view payload) { s.write_all(frame_bytes(payload)); }

std::optional<std::string> read_frame(Socket& s, std::size_t max_bytes) {
    auto header = s.read_exact(kFrameHeaderBytes);
    if (!header) return std::nullopt;
    auto n = decode_frame_header(*header, max_bytes);
    if (n == 0) return std::string{};
    auto body = s.read_exact(n);
    if (!body) throw error(errc::malformed, "connection closed mid-frame");
    return body;
}

} // namespace sda::proto
