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
 * @file role_map.hpp
 * @brief Fingerprint-keyed authorization table.
 */

#pragma once

#include "sda/proto/bodies.hpp"

#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace sda::platform {

struct RoleEntry {
    crypto::Fingerprint fingerprint;
    std::string role_name;
    std::set<proto::CommandKind> allowed_kinds;
    std::optional<std::set<std::string>> allowed_doc_types;  ///< nullopt = every type
    crypto::RoleCertificate certificate;

    [[nodiscard]] bool type_allowed(std::string_view type_name) const {
        return !allowed_doc_types || allowed_doc_types->contains(std::string(type_name));
    }
};

class RoleMap {
public:
    /// Seeds the role-set entry, which is fixed for the map's lifetime.
    explicit RoleMap(crypto::RoleCertificate role_set_certificate);

    /// Kinds granted to the role-set identity.
    [[nodiscard]] static std::set<proto::CommandKind> role_set_kinds();

    [[nodiscard]] const crypto::Fingerprint& role_set_fingerprint() const noexcept { return role_set_fp_; }
    [[nodiscard]] const RoleEntry* find(const crypto::Fingerprint& fp) const;
    [[nodiscard]] const std::map<crypto::Fingerprint, RoleEntry>& entries() const noexcept { return entries_; }

    /// Adds or replaces. Throws error(malformed_cert) unless the certificate is
    /// self-signed or issued by the role-set certificate, and
    /// error(validation_failed) for the role-set fingerprint itself.
    void install(const proto::RoleGrant& grant);
    /// Throws error(not_found) or error(validation_failed) for the role-set entry.
    void revoke(const crypto::Fingerprint& fp);

    /// Role-map predicate. Port restrictions are applied by the caller.
    [[nodiscard]] std::optional<errc> authorize(const crypto::Fingerprint& fp, proto::CommandKind kind,
                                                std::optional<std::string_view> doc_type = std::nullopt) const;

    /// Installed grants, excluding the seeded role-set entry.
    [[nodiscard]] std::vector<proto::RoleGrant> grants() const;

private:
    crypto::Fingerprint role_set_fp_;
    std::map<crypto::Fingerprint, RoleEntry> entries_;
};

} // namespace sda::platform
