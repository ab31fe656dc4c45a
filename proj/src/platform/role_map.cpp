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

#include "sda/platform/role_map.hpp"

#include "sda/common/error.hpp"

namespace sda::platform {

using proto::CommandKind;

RoleMap::RoleMap(crypto::RoleCertificate role_set_certificate)
    : role_set_fp_(crypto::fingerprint(role_set_certificate)) {
    RoleEntry e;
    e.fingerprint = role_set_fp_;
    e.role_name = role_set_certificate.role_name;
    e.allowed_kinds = role_set_kinds();
    e.certificate = std::move(role_set_certificate);
    entries_.emplace(role_set_fp_, std::move(e));
}

std::set<CommandKind> RoleMap::role_set_kinds() {
    return {CommandKind::install_role, CommandKind::revoke_role, CommandKind::start_port,
            CommandKind::stop_port,    CommandKind::status,      CommandKind::list_types};
}

const RoleEntry* RoleMap::find(const crypto::Fingerprint& fp) const {
    auto it = entries_.find(fp);
    return it == entries_.end() ? nullptr : &it->second;
}

void RoleMap::install(const proto::RoleGrant& grant) {
    auto fp = crypto::fingerprint(grant.certificate);
    if (fp == role_set_fp_) throw error(errc::validation_failed, "the role-set entry is fixed");
    const auto& issuer = entries_.at(role_set_fp_).certificate;
    bool trusted = grant.certificate.self_signed() ? crypto::verify_self_signed(grant.certificate)
                                                   : crypto::verify_issued_by(grant.certificate, issuer);
    if (!trusted) throw error(errc::malformed_cert, "certificate does not verify: " + fp.prefix());
    RoleEntry e;
    e.fingerprint = fp;
    e.role_name = grant.certificate.role_name;
    e.allowed_kinds = grant.kinds;
    e.allowed_doc_types = grant.doc_types;
    e.certificate = grant.certificate;
    entries_.insert_or_assign(fp, std::move(e));
}

void RoleMap::revoke(const crypto::Fingerprint& fp) {
    if (fp == role_set_fp_) throw error(errc::validation_failed, "the role-set entry cannot be revoked");
    if (entries_.erase(fp) == 0) throw error(errc::not_found, "no role " + fp.prefix());
}

std::optional<errc> RoleMap::authorize(const crypto::Fingerprint& fp, CommandKind kind,
                                       std::optional<std::string_view> doc_type) const {
    const auto* e = find(fp);
    if (!e) return errc::unknown_role;
    if (proto::is_admin_kind(kind) && fp != role_set_fp_) return errc::command_not_allowed;
    if (!e->allowed_kinds.contains(kind)) return errc::command_not_allowed;
    if (doc_type && !e->type_allowed(*doc_type)) return errc::type_not_allowed;
    return std::nullopt;
}

std::vector<proto::RoleGrant> RoleMap::grants() const {
    std::vector<proto::RoleGrant> out;
    for (const auto& [fp, e] : entries_) {
        if (fp == role_set_fp_) continue;
        out.push_back({e.certificate, e.allowed_kinds, e.allowed_doc_types});
    }
    return out;
}

} // namespace sda::platform
