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

#include "sda/common/error.hpp"
#include "sda/proto/socket.hpp"
#include "sda/proto/transport.hpp"

#include <httplib.h>

#include <thread>

namespace sda::proto {

namespace {

struct ParsedUrl {
    std::string scheme_host_port;
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    auto path_start = url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) return {url, std::string(kGatewayPath)};
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

GatewayTransport::GatewayTransport(std::string url) : url_(std::move(url)) {}

std::string GatewayTransport::exchange(const std::string& command_xml) {
    auto [base, path] = split_url(url_);
    httplib::Client client(base);
    client.set_connection_timeout(5);
    client.set_read_timeout(60);
    auto res = client.Post(path, command_xml, std::string(kGatewayContentType));
    if (!res) {
        throw error(errc::gateway_unreachable, url_ + ": " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw error(errc::gateway_bad_response, "HTTP " + std::to_string(res->status) + ": " + res->body);
    }
    return res->body;
}

struct Gateway::Impl {
    std::string upstream_host;
    std::uint16_t upstream_port;
    std::size_t max_frame_bytes;
    httplib::Server server;
    std::thread thread;
};

Gateway::Gateway(std::string upstream_host, std::uint16_t upstream_port, std::size_t max_frame_bytes)
    : impl_(std::make_unique<Impl>()) {
    impl_->upstream_host = std::move(upstream_host);
    impl_->upstream_port = upstream_port;
    impl_->max_frame_bytes = max_frame_bytes;
    impl_->server.set_payload_max_length(max_frame_bytes);
    impl_->server.Post(std::string(kGatewayPath), [impl = impl_.get()](const httplib::Request& req,
                                                                       httplib::Response& res) {
        try {
            auto s = Socket::connect(impl->upstream_host, impl->upstream_port);
            write_frame(s, req.body);
            auto reply = read_frame(s, impl->max_frame_bytes);
            if (!reply) throw error(errc::unreachable, "upstream closed without a response");
            res.set_content(*reply, std::string(kGatewayContentType));
        } catch (const error& e) {
            res.status = 502;
            res.set_content(e.what(), "text/plain");
        }
    });
}

Gateway::~Gateway() { stop(); }

std::uint16_t Gateway::start(const std::string& host, std::uint16_t port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw error(errc::startup, "gateway cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return static_cast<std::uint16_t>(bound);
}

void Gateway::run(const std::string& host, std::uint16_t port) {
    if (!impl_->server.listen(host, port)) {
        throw error(errc::startup, "gateway cannot listen on " + host + ":" + std::to_string(port));
    }
}

void Gateway::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

} // namespace sda::proto
