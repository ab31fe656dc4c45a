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
 * @file repository.hpp
 * @brief Definitions repository, document directory and certificate store,
 *        persisted file-per-entity under the data directory.
 *
 * Layout:
 * @code
 *   defs/<n>.xml     one <doctype> each, n = install order
 *   sheets/<n>.xml   one <stylesheet> each
 *   docs/d<n>.xml    one stored <edoc> each, ids gap-free from d1
 *   certs/<fp>.xml   every certificate ever installed as a role
 *   roles.xml        installed role grants
 * @endcode
 * Every mutation is written (atomic rename, fsync) before memory changes.
 * Not thread-safe; the platform serializes access.
 */

#pragma once

#include "sda/proto/bodies.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sda::platform {

class Repository {
public:
    /// Loads and audits everything. A doc that fails to parse or verify,
    /// or a gap in doc ids, throws error(startup) naming the doc.
    [[nodiscard]] static Repository open(const std::filesystem::path& data_dir,
                                         std::map<std::string, std::string> static_attributes = {});

    // Definitions repository.
    [[nodiscard]] const edoc::DocTypeDefinition* definition(const std::string& type, int version) const;
    [[nodiscard]] const edoc::DocTypeDefinition* latest(const std::string& type) const;
    [[nodiscard]] std::optional<edoc::Stylesheet> stylesheet(const std::string& id) const;
    /// Lowest-id stylesheet for `type` in `locale`.
    [[nodiscard]] std::optional<edoc::Stylesheet> stylesheet_for(const std::string& type,
                                                                 const std::string& locale) const;
    [[nodiscard]] std::size_t definition_count() const noexcept { return definitions_.size(); }
    [[nodiscard]] std::size_t stylesheet_count() const noexcept { return stylesheets_.size(); }
    [[nodiscard]] proto::TypeCatalog catalog() const;

    /// Throws error(validation_failed) or error(duplicate_definition).
    void install_definition(const edoc::DocTypeDefinition& def);
    /// Throws error(unknown_type), error(duplicate_stylesheet), error(bad_template), error(type_mismatch).
    void install_stylesheet(const edoc::Stylesheet& sheet);

    // Document directory.
    [[nodiscard]] const edoc::EDoc* doc(const std::string& doc_id) const;
    [[nodiscard]] std::size_t doc_count() const noexcept { return docs_.size(); }
    /// Docs in id order.
    [[nodiscard]] std::vector<const edoc::EDoc*> docs() const;
    /// Checks type, field validity and every signature, then assigns the next
    /// id. Throws error(unknown_type), error(validation_failed),
    /// error(unsigned_doc) or error(invalid_signature).
    [[nodiscard]] std::string store(edoc::EDoc doc);
    /// Throws error(unknown_doc), error(immutable_attribute), error(malformed).
    void set_attribute(const std::string& doc_id, const std::string& name, std::string value);
    [[nodiscard]] const std::map<std::string, std::string>& static_attributes() const noexcept {
        return static_attributes_;
    }

    /// Re-verifies every stored doc; returns the ids that fail.
    [[nodiscard]] std::vector<std::string> audit() const;
    [[nodiscard]] edoc::DocVerification verify(const edoc::EDoc& doc) const;

    // Certificate store and persisted role grants.
    [[nodiscard]] const edoc::CertificateMap& certificates() const noexcept { return certs_; }
    void remember_certificate(const crypto::RoleCertificate& cert);
    [[nodiscard]] const std::vector<proto::RoleGrant>& role_grants() const noexcept { return grants_; }
    void save_role_grants(std::vector<proto::RoleGrant> grants);

private:
    Repository() = default;
    [[nodiscard]] std::filesystem::path doc_path(const std::string& doc_id) const;
    [[nodiscard]] edoc::StylesheetLookup lookup() const;

    std::filesystem::path dir_;
    std::map<std::pair<std::string, int>, edoc::DocTypeDefinition> definitions_;
    std::map<std::string, edoc::Stylesheet> stylesheets_;
    std::map<std::size_t, edoc::EDoc> docs_;  // keyed by numeric id
    std::map<std::string, std::string> static_attributes_;
    edoc::CertificateMap certs_;
    std::vector<proto::RoleGrant> grants_;
};

/// "d7" -> 7; nullopt for anything else.
[[nodiscard]] std::optional<std::size_t> parse_doc_id(std::string_view id);

} // namespace sda::platform
