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

#include "sda/client/client.hpp"

#include "sda/common/error.hpp"

namespace sda::client {

using proto::CommandKind;

PlatformError::PlatformError(proto::Status status, errc code, std::string code_text, const std::string& detail)
    : error(code, detail),
      status_(status),
      verbatim_(std::string(proto::to_string(status)) + "/" + std::move(code_text)) {}

std::string reply_detail(const proto::ResponseEnvelope& resp) {
    const auto* d = resp.payload.child("detail");
    return d ? d->text() : std::string{};
}

Client::Client(std::unique_ptr<proto::Transport> transport, crypto::KeystoreSession session,
               std::optional<crypto::RoleCertificate> platform_cert, Clock clock)
    : transport_(std::move(transport)),
      session_(std::move(session)),
      platform_cert_(std::move(platform_cert)),
      clock_(std::move(clock)) {}

proto::ResponseEnvelope Client::call(CommandKind kind, xml::Element body) {
    auto env = proto::build_envelope(kind, std::move(body), session_, clock_());
    auto resp = proto::round_trip(*transport_, env);
    if (platform_cert_) proto::verify_response(resp, *platform_cert_);
    if (!resp.in_reply_to.empty() && resp.in_reply_to != env.nonce) {
        throw error(errc::bad_response_signature, "reply to a different command");
    }
    return resp;
}

xml::Element Client::request(CommandKind kind, xml::Element body) {
    auto resp = call(kind, std::move(body));
    if (resp.status == proto::Status::ok) return std::move(resp.payload);
    auto code = parse_errc(resp.error_code).value_or(errc::internal);
    throw PlatformError(resp.status, code, resp.error_code, reply_detail(resp));
}

void Client::install_definition(const edoc::DocTypeDefinition& def) {
    (void)request(CommandKind::install_definition, proto::install_definition_body(def));
}

void Client::install_stylesheet(const edoc::Stylesheet& sheet) {
    (void)request(CommandKind::install_stylesheet, proto::install_stylesheet_body(sheet));
}

void Client::install_role(const proto::RoleGrant& grant) {
    (void)request(CommandKind::install_role, proto::install_role_body(grant));
}

void Client::revoke_role(const crypto::Fingerprint& fp) {
    (void)request(CommandKind::revoke_role, proto::revoke_role_body(fp));
}

edoc::EDoc Client::create_doc(const std::string& type, const std::map<std::string, std::string>& values,
                              std::optional<int> version) {
    return proto::doc_payload(request(CommandKind::create_doc, proto::create_doc_body(type, version, values)));
}

std::string Client::store_doc(const edoc::EDoc& doc) {
    return proto::stored_doc_id(request(CommandKind::store_doc, proto::store_doc_body(doc)));
}

edoc::EDoc Client::get_doc(const std::string& doc_id) {
    return proto::doc_payload(request(CommandKind::get_doc, proto::get_doc_body(doc_id)));
}

std::vector<proto::SearchHit> Client::search(const proto::SearchQuery& query) {
    return proto::search_hits(request(CommandKind::search_docs, proto::search_body(query)));
}

edoc::RenderedView Client::render(const proto::DocRef& ref, const std::optional<std::string>& stylesheet_id,
                                  const std::optional<std::string>& locale) {
    return proto::view_payload(request(CommandKind::render_doc, proto::render_body(ref, stylesheet_id, locale)));
}

edoc::DocVerification Client::verify(const proto::DocRef& ref) {
    return proto::verification_payload(request(CommandKind::verify_doc, proto::verify_body(ref)));
}

void Client::set_attribute(const std::string& doc_id, const std::string& name, const std::string& value) {
    (void)request(CommandKind::set_attribute, proto::set_attribute_body(doc_id, name, value));
}

std::optional<std::string> Client::get_attribute(const std::string& doc_id, const std::string& name) {
    return proto::attribute_value(request(CommandKind::get_attribute, proto::get_attribute_body(doc_id, name)));
}

proto::TypeCatalog Client::list_types() {
    return proto::type_catalog(request(CommandKind::list_types, proto::empty_body()));
}

proto::PlatformStatus Client::status() {
    return proto::platform_status(request(CommandKind::status, proto::empty_body()));
}

void Client::start_port(const std::string& name) {
    (void)request(CommandKind::start_port, proto::port_control_body(name));
}

void Client::stop_port(const std::string& name) {
    (void)request(CommandKind::stop_port, proto::port_control_body(name));
}

} // namespace sda::client
