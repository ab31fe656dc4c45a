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

#pragma once

#include "fixtures.hpp"

#include "sda/platform/platform.hpp"
#include "sda/proto/bodies.hpp"
#include "sda/proto/transport.hpp"

#include <atomic>
#include <filesystem>
#include <memory>
#include <random>

namespace sda::testing {

class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() / ("sda-" + tag + "-" + std::to_string(rd()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// An identity with an unlocked in-memory keystore.
struct Actor {
    explicit Actor(Identity identity) : id(std::move(identity)), ks(id.keystore()), session(ks.open(kPin)) {}
    Actor(const std::string& subject, const std::string& role, const Identity* issuer = nullptr)
        : Actor(make_identity(subject, role, issuer)) {}

    Identity id;
    crypto::SoftKeystore ks;
    crypto::KeystoreSession session;
};

inline std::set<proto::CommandKind> document_kinds() {
    using K = proto::CommandKind;
    return {K::create_doc,    K::store_doc,     K::get_doc,    K::search_docs, K::render_doc,
            K::verify_doc,    K::set_attribute, K::get_attribute, K::list_types};
}

/// In-process platform over a temporary data dir with a settable clock.
struct PlatformHarness {
    TempDir dir{"platform"};
    std::shared_ptr<std::atomic<Timestamp>> now = std::make_shared<std::atomic<Timestamp>>(at(2026, 3, 1, 10));
    Actor role_set{"Role administrator", "role-set"};
    Actor platform_id{"Platform", "platform"};
    Actor definer{"Definer", "definer"};
    Actor physician{"Dr Pillon", "physician"};
    Actor viewer{"WYSIWYS viewer", "viewer"};
    Actor sa{"Scenario application", "scenario"};
    platform::ServerConfig config;
    std::unique_ptr<platform::Platform> platform;

    explicit PlatformHarness(bool open_ports = false) {
        crypto::save_certificate(dir.path() / "role-set.cert.xml", role_set.id.cert);
        config.ports = {{"scenario", 0, std::nullopt, platform::Visibility::local},
                        {"service", 0, std::nullopt, platform::Visibility::local},
                        {"administration", 0, std::nullopt, platform::Visibility::local}};
        config.role_set_certificate = dir.path() / "role-set.cert.xml";
        config.platform_keystore = dir.path() / "unused";
        config.data_dir = dir.path() / "data";
        config.log_path = dir.path() / "platform.log";
        boot(open_ports);
    }

    void boot(bool open_ports) {
        auto clock = [n = now] { return n->load(); };
        platform = std::make_unique<platform::Platform>(config, platform_id.ks.open(kPin), clock);
        if (open_ports) platform->start();
    }

    void restart(bool open_ports = false) {
        platform.reset();
        boot(open_ports);
    }

    void advance(std::chrono::seconds s) { now->store(now->load() + s); }

    proto::CommandEnvelope envelope(const Actor& who, proto::CommandKind kind, xml::Element body) const {
        return proto::build_envelope(kind, std::move(body), who.session, now->load());
    }

    proto::ResponseEnvelope send(const Actor& who, proto::CommandKind kind, xml::Element body,
                                 const std::string& port = "service") {
        return platform->handle(envelope(who, kind, std::move(body)), port);
    }

    proto::ResponseEnvelope grant(const Actor& who, std::set<proto::CommandKind> kinds,
                                  std::optional<std::set<std::string>> types = std::nullopt) {
        return send(role_set, proto::CommandKind::install_role,
                    proto::install_role_body({who.id.cert, std::move(kinds), std::move(types)}), "administration");
    }

    /// Definer, physician (medical-report only), viewer and SA roles plus
    /// the medical-report and lab-order types with their stylesheets.
    void bootstrap() {
        using K = proto::CommandKind;
        grant(definer, {K::install_definition, K::install_stylesheet, K::list_types});
        grant(physician, document_kinds(), std::set<std::string>{"medical-report"});
        grant(viewer, {K::render_doc, K::verify_doc, K::get_doc});
        grant(sa, document_kinds());
        send(definer, K::install_definition, proto::install_definition_body(emr_definition()));
        send(definer, K::install_definition, proto::install_definition_body(lab_order_definition()));
        send(definer, K::install_stylesheet, proto::install_stylesheet_body(emr_sheet_en()));
        send(definer, K::install_stylesheet, proto::install_stylesheet_body(emr_sheet_it()));
        send(definer, K::install_stylesheet, proto::install_stylesheet_body(lab_sheet()));
    }

    /// A doc signed by `who` with an Italian view binding.
    edoc::EDoc signed_emr(const Actor& who, std::map<std::string, std::string> values = rossi_values()) const {
        auto doc = edoc::create_doc(emr_definition(), values, now->load());
        auto view = edoc::render(doc, emr_sheet_it());
        auto block = who.session.sign_block(edoc::content_bytes(doc),
                                            crypto::ViewBinding{view.stylesheet_id, view.view_digest}, now->load());
        return edoc::attach_signature(std::move(doc), block, who.id.cert);
    }
};

} // namespace sda::testing

namespace sda::testing {

/// Hands command XML straight to an in-process platform.
class LoopbackTransport final : public proto::Transport {
public:
    LoopbackTransport(platform::Platform& platform, std::string port) : platform_(platform), port_(std::move(port)) {}
    std::string exchange(const std::string& command_xml) override { return platform_.handle_xml(command_xml, port_); }
    std::string describe() const override { return "loopback:" + port_; }

private:
    platform::Platform& platform_;
    std::string port_;
};

} // namespace sda::testing
