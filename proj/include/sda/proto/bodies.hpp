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
 * @file bodies.hpp
 * @brief Builders and readers for the kind-specific command bodies and
 *        response payloads. Element names are listed in docs/protocol.md.
 */

#pragma once

#include "sda/edoc/edoc.hpp"
#include "sda/proto/command.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sda::proto {

/// Permissions attached to one role certificate.
struct RoleGrant {
    crypto::RoleCertificate certificate;
    std::set<CommandKind> kinds;
    std::optional<std::set<std::string>> doc_types;  ///< nullopt = every type

    bool operator==(const RoleGrant&) const = default;
};

[[nodiscard]] xml::Element to_xml(const RoleGrant& grant);
[[nodiscard]] RoleGrant role_grant_from_xml(const xml::Element& e);

struct SearchQuery {
    std::optional<std::string> type_name;
    std::map<std::string, std::string> attributes;
};

struct SearchHit {
    std::string doc_id;
    std::string type_name;
    bool operator==(const SearchHit&) const = default;
};

/// Which doc a RENDER_DOC / VERIFY_DOC acts on: a stored one or one sent inline.
struct DocRef {
    std::optional<std::string> doc_id;
    std::optional<edoc::EDoc> inline_doc;
};

struct PortStatus {
    std::string name;
    int tcp_port = 0;
    bool running = false;
    std::string visibility;
    bool operator==(const PortStatus&) const = default;
};

struct PlatformStatus {
    long uptime_seconds = 0;
    std::size_t docs = 0;
    std::size_t definitions = 0;
    std::size_t stylesheets = 0;
    std::size_t roles = 0;
    std::vector<PortStatus> ports;
};

// Command bodies. Each returns the <body> element.
[[nodiscard]] xml::Element install_definition_body(const edoc::DocTypeDefinition& def);
[[nodiscard]] xml::Element install_stylesheet_body(const edoc::Stylesheet& sheet);
[[nodiscard]] xml::Element install_role_body(const RoleGrant& grant);
[[nodiscard]] xml::Element revoke_role_body(const crypto::Fingerprint& fp);
[[nodiscard]] xml::Element create_doc_body(const std::string& type_name, std::optional<int> version,
                                           const std::map<std::string, std::string>& values);
[[nodiscard]] xml::Element store_doc_body(const edoc::EDoc& doc);
[[nodiscard]] xml::Element get_doc_body(const std::string& doc_id);
[[nodiscard]] xml::Element search_body(const SearchQuery& query);
/// Exactly one of stylesheet_id / locale is expected; locale picks the type's sheet for it.
[[nodiscard]] xml::Element render_body(const DocRef& ref, const std::optional<std::string>& stylesheet_id,
                                       const std::optional<std::string>& locale = std::nullopt);
[[nodiscard]] xml::Element verify_body(const DocRef& ref);
[[nodiscard]] xml::Element set_attribute_body(const std::string& doc_id, const std::string& name,
                                              const std::string& value);
[[nodiscard]] xml::Element get_attribute_body(const std::string& doc_id, const std::string& name);
[[nodiscard]] xml::Element port_control_body(const std::string& port_name);
[[nodiscard]] xml::Element empty_body();

[[nodiscard]] DocRef doc_ref_from_xml(const xml::Element& e);
[[nodiscard]] SearchQuery search_query_from_xml(const xml::Element& e);

// Response payloads. Readers take the <payload> element and throw error(malformed).
[[nodiscard]] xml::Element stored_payload(const std::string& doc_id);
[[nodiscard]] std::string stored_doc_id(const xml::Element& payload);
[[nodiscard]] edoc::EDoc doc_payload(const xml::Element& payload);
[[nodiscard]] edoc::RenderedView view_payload(const xml::Element& payload);
[[nodiscard]] edoc::DocVerification verification_payload(const xml::Element& payload);
[[nodiscard]] xml::Element search_payload(const std::vector<SearchHit>& hits);
[[nodiscard]] std::vector<SearchHit> search_hits(const xml::Element& payload);
[[nodiscard]] xml::Element attribute_payload(const std::string& name, const std::optional<std::string>& value);
[[nodiscard]] std::optional<std::string> attribute_value(const xml::Element& payload);
[[nodiscard]] xml::Element status_payload(const PlatformStatus& status);
[[nodiscard]] PlatformStatus platform_status(const xml::Element& payload);
/// LIST_TYPES payload: <types><doctype/>...<stylesheet/>...</types>.
struct TypeCatalog {
    std::vector<edoc::DocTypeDefinition> definitions;
    std::vector<edoc::Stylesheet> stylesheets;
};
[[nodiscard]] xml::Element catalog_payload(const TypeCatalog& catalog);
[[nodiscard]] TypeCatalog type_catalog(const xml::Element& payload);

} // namespace sda::proto
