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

namespace sda::proto {

TcpTransport::TcpTransport(std::string host, std::uint16_t port, std::size_t max_frame_bytes)
    : host_(std::move(host)), port_(port), max_frame_bytes_(max_frame_bytes) {}

std::string TcpTransport::exchange(const std::string& command_xml) {
    auto s = Socket::connect(host_, port_);
    write_frame(s, command_xml);
    auto reply = read_frame(s, max_frame_bytes_);
    if (!reply) throw error(errc::unreachable, describe() + " closed without a response");
    return *reply;
}

std::string TcpTransport::describe() const { return "tcp://" + host_ + ":" + std::to_string(port_); }

std::unique_ptr<Transport> make_transport(const std::string& address) {
    constexpr std::string_view tcp = "tcp://";
    if (address.starts_with("http://")) return std::make_unique<GatewayTransport>(address);
    std::string_view rest = address;
    if (rest.starts_with(tcp)) rest.remove_prefix(tcp.size());
    auto colon = rest.rfind(':');
    if (colon == std::string_view::npos) throw error(errc::malformed, "address needs host:port: " + address);
    int port = 0;
    try {
        port = std::stoi(std::string(rest.substr(colon + 1)));
    } catch (const std::exception&) {
        throw error(errc::malformed, "bad port in " + address);
    }
    if (port <= 0 || port > 65535) throw error(errc::malformed, "bad port in " + address);
    return std::make_unique<TcpTransport>(std::string(rest.substr(0, colon)), static_cast<std::uint16_t>(port));
}

ResponseEnvelope round_trip(Transport& transport, const CommandEnvelope& env) {
    auto reply = transport.exchange(xml::canonicalize(to_xml(env)));
    return response_from_xml(xml::parse(reply));
}

} // namespace sda::proto
