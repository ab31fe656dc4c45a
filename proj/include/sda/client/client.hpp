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
 * @file client.hpp
 * @brief Shared client library: signs commands, sends them, checks replies.
 */

#pragma once

#include "sda/proto/bodies.hpp"
#include "sda/proto/envelope.hpp"
#include "sda/proto/transport.hpp"

#include <memory>
#include <optional>

namespace sda::client {

/// A DENIED or ERROR reply, surfaced with the platform's code.
class PlatformError : public error {
public:
    PlatformError(proto::Status status, errc code, std::string code_text, const std::string& detail);
    [[nodiscard]] proto::Status status() const noexcept { return status_; }
    /// Wire spelling of the code, e.g. "DENIED/COMMAND_NOT_ALLOWED".
    [[nodiscard]] const std::string& verbatim() const noexcept { return verbatim_; }

private:
    proto::Status status_;
    std::string verbatim_;
};

class Client {
public:
    /// `platform_cert` enables response signature checks.
    Client(std::unique_ptr<proto::Transport> transport, crypto::KeystoreSession session,
           std::optional<crypto::RoleCertificate> platform_cert = std::nullopt, Clock clock = system_clock());

    /// Raw exchange; the reply may be DENIED or ERROR.
    [[nodiscard]] proto::ResponseEnvelope call(proto::CommandKind kind, xml::Element body);
    /// Returns the payload of an OK reply, throws PlatformError otherwise.
    [[nodiscard]] xml::Element request(proto::CommandKind kind, xml::Element body);

    [[nodiscard]] const crypto::KeystoreSession& session() const noexcept { return session_; }
    [[nodiscard]] proto::Transport& transport() noexcept { return *transport_; }

    void install_definition(const edoc::DocTypeDefinition& def);
    void install_stylesheet(const edoc::Stylesheet& sheet);
    void install_role(const proto::RoleGrant& grant);
    void revoke_role(const crypto::Fingerprint& fp);
    [[nodiscard]] edoc::EDoc create_doc(const std::string& type, const std::map<std::string, std::string>& values,
                                        std::optional<int> version = std::nullopt);
    [[nodiscard]] std::string store_doc(const edoc::EDoc& doc);
    [[nodiscard]] edoc::EDoc get_doc(const std::string& doc_id);
    [[nodiscard]] std::vector<proto::SearchHit> search(const proto::SearchQuery& query);
    [[nodiscard]] edoc::RenderedView render(const proto::DocRef& ref, const std::optional<std::string>& stylesheet_id,
                                            const std::optional<std::string>& locale = std::nullopt);
    [[nodiscard]] edoc::DocVerification verify(const proto::DocRef& ref);
    void set_attribute(const std::string& doc_id, const std::string& name, const std::string& value);
    [[nodiscard]] std::optional<std::string> get_attribute(const std::string& doc_id, const std::string& name);
    [[nodiscard]] proto::TypeCatalog list_types();
    [[nodiscard]] proto::PlatformStatus status();
    void start_port(const std::string& name);
    void stop_port(const std::string& name);

private:
    std::unique_ptr<proto::Transport> transport_;
    crypto::KeystoreSession session_;
    std::optional<crypto::RoleCertificate> platform_cert_;
    Clock clock_;
};

/// Text of the <detail> leaf an error reply may carry.
[[nodiscard]] std::string reply_detail(const proto::ResponseEnvelope& resp);

} // namespace sda::client
