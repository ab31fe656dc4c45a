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

#include "sda/platform/config.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"
#include "sda/xml/xml.hpp"

#include <cstdlib>

namespace sda::platform {

namespace {

const std::set<std::string, std::less<>> kPortNames = {"scenario", "service", "administration"};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path{p};
    return path.is_absolute() ? path : base / path;
}

unsigned long long number(const std::string& text, const std::string& what) {
    try {
        std::size_t used = 0;
        auto v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw error(errc::startup, "bad " + what + ": " + text);
    }
}

} // namespace

std::string_view to_string(Visibility v) noexcept { return v == Visibility::local ? "local" : "external"; }

void check_config(const ServerConfig& config) {
    int admin = 0;
    std::set<std::string> names;
    std::set<std::uint16_t> tcp;
    for (const auto& p : config.ports) {
        if (!kPortNames.contains(p.name)) throw error(errc::startup, "unknown port name " + p.name);
        if (!names.insert(p.name).second) throw error(errc::startup, "port configured twice: " + p.name);
        if (p.tcp_port != 0 && !tcp.insert(p.tcp_port).second) {
            throw error(errc::startup, "tcp port used twice: " + std::to_string(p.tcp_port));
        }
        if (p.is_administration()) {
            ++admin;
            if (p.visibility != Visibility::local) throw error(errc::startup, "administration port must be local");
        }
    }
    if (admin != 1) throw error(errc::startup, "exactly one administration port is required");
    if (config.data_dir.empty()) throw error(errc::startup, "data-dir is required");
    if (config.role_set_certificate.empty()) throw error(errc::startup, "role-set-certificate is required");
    if (config.platform_keystore.empty()) throw error(errc::startup, "platform-keystore is required");
    if (config.replay_window.count() <= 0) throw error(errc::startup, "replay window must be positive");
    if (config.max_frame_bytes < 1024) throw error(errc::startup, "max-frame-bytes too small");
}

ServerConfig load_config(const std::filesystem::path& path) {
    xml::Element root;
    try {
        root = xml::parse(read_file(path));
    } catch (const error& e) {
        throw error(errc::startup, "config " + path.string() + ": " + e.what());
    }
    if (root.name() != "server-config") throw error(errc::startup, "config root must be <server-config>");
    auto base = std::filesystem::absolute(path).parent_path();
    ServerConfig c;
    try {
        for (const auto* p : root.children_named("port")) {
            PortConfig pc;
            pc.name = p->required_attr("name");
            pc.tcp_port = static_cast<std::uint16_t>(number(p->required_attr("tcp-port"), "tcp-port"));
            auto vis = p->attr("visibility").value_or("local");
            if (vis == "local") {
                pc.visibility = Visibility::local;
            } else if (vis == "external") {
                pc.visibility = Visibility::external;
            } else {
                throw error(errc::startup, "bad visibility " + vis);
            }
            auto kinds = p->children_named("kind");
            if (!kinds.empty()) {
                pc.allowed_kinds.emplace();
                for (const auto* k : kinds) {
                    pc.allowed_kinds->insert(proto::parse_command_kind(k->text()));
                }
            }
            c.ports.push_back(std::move(pc));
        }
        if (const auto* e = root.child("role-set-certificate")) c.role_set_certificate = resolve(base, e->text());
        if (const auto* e = root.child("platform-keystore")) {
            c.platform_keystore = resolve(base, e->text());
            c.platform_pin = e->attr("pin").value_or("");
        }
        if (const auto* e = root.child("data-dir")) c.data_dir = resolve(base, e->text());
        if (const auto* e = root.child("db-connection")) c.db_connection = e->text();
        if (const auto* e = root.child("log")) c.log_path = resolve(base, e->text());
        if (const auto* e = root.child("replay-window-seconds")) {
            c.replay_window = std::chrono::seconds(number(e->text(), "replay-window-seconds"));
        }
        if (const auto* e = root.child("max-frame-bytes")) c.max_frame_bytes = number(e->text(), "max-frame-bytes");
        for (const auto* a : root.children_named("static-attribute")) {
            c.static_attributes[a->required_attr("name")] = a->text();
        }
    } catch (const error& e) {
        if (e.code() == errc::startup) throw;
        throw error(errc::startup, "config " + path.string() + ": " + e.what());
    }
    if (const char* dir = std::getenv("SDA_DATA_DIR"); dir && *dir) c.data_dir = dir;
    if (c.platform_pin.empty()) {
        if (const char* pin = std::getenv("SDA_PLATFORM_PIN")) c.platform_pin = pin;
    }
    check_config(c);
    return c;
}

std::string config_to_xml(const ServerConfig& c) {
    xml::Element root{"server-config"};
    for (const auto& p : c.ports) {
        auto& e = root.add(xml::Element{"port"});
        e.set("name", p.name);
        e.set("tcp-port", std::to_string(p.tcp_port));
        e.set("visibility", std::string(to_string(p.visibility)));
        if (p.allowed_kinds) {
            for (auto k : *p.allowed_kinds) {
                e.add_leaf("kind", std::string(proto::to_string(k)));
            }
        }
    }
    root.add_leaf("role-set-certificate", c.role_set_certificate.string());
    auto& ks = root.add_leaf("platform-keystore", c.platform_keystore.string());
    if (!c.platform_pin.empty()) ks.set("pin", c.platform_pin);
    root.add_leaf("data-dir", c.data_dir.string());
    root.add_leaf("db-connection", c.db_connection);
    if (!c.log_path.empty()) root.add_leaf("log", c.log_path.string());
    root.add_leaf("replay-window-seconds", std::to_string(c.replay_window.count()));
    root.add_leaf("max-frame-bytes", std::to_string(c.max_frame_bytes));
    for (const auto& [name, value] : c.static_attributes) {
        root.add_leaf("static-attribute", value).set("name", name);
    }
    return xml::canonicalize(root);
}

} // namespace sda::platform
