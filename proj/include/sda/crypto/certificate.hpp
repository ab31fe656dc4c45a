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
 * @file certificate.hpp
 * @brief Role certificates in a self-contained canonical-XML encoding.
 *
 * Layout (canonical form, attributes sorted):
 * @code
 *   <certificate version="1">
 *     <serial/> <subject/> <role/> <public-key alg="ed25519"/>
 *     <issuer/> <not-before/> <not-after/> <signature/>
 *   </certificate>
 * @endcode
 * The issuer signature covers the same element with <signature> omitted.
 * The fingerprint is SHA-256 over the full canonical bytes.
 */

#pragma once

#include "sda/common/time.hpp"
#include "sda/crypto/keys.hpp"
#include "sda/xml/xml.hpp"

#include <compare>
#include <filesystem>
#include <optional>
#include <string>

namespace sda::crypto {

/// Lowercase-hex SHA-256 of a certificate's canonical encoding.
class Fingerprint {
public:
    Fingerprint() = default;
    /// Throws error(malformed) unless `hex` is 64 lowercase hex characters.
    [[nodiscard]] static Fingerprint from_hex(std::string_view hex);

    [[nodiscard]] const std::string& hex() const noexcept { return hex_; }
    [[nodiscard]] std::string prefix(std::size_t n = 12) const { return hex_.substr(0, n); }
    [[nodiscard]] bool empty() const noexcept { return hex_.empty(); }

    auto operator<=>(const Fingerprint&) const = default;

private:
    std::string hex_;
};

struct Validity {
    Timestamp not_before;
    Timestamp not_after;
};

struct RoleCertificate {
    std::string serial;
    std::string subject_name;
    std::string role_name;
    PublicKey public_key{};
    std::optional<Fingerprint> issuer_fingerprint;  ///< empty when self-signed
    Timestamp not_before;
    Timestamp not_after;
    SignatureValue issuer_signature{};

    [[nodiscard]] bool self_signed() const noexcept { return !issuer_fingerprint.has_value(); }
    [[nodiscard]] bool valid_at(Timestamp t) const noexcept { return not_before <= t && t <= not_after; }

    bool operator==(const RoleCertificate&) const = default;
};

[[nodiscard]] xml::Element to_xml(const RoleCertificate& cert);
/// Throws error(malformed_cert).
[[nodiscard]] RoleCertificate certificate_from_xml(const xml::Element& e);

/// Canonical bytes of everything except the issuer signature.
[[nodiscard]] std::string tbs_bytes(const RoleCertificate& cert);
[[nodiscard]] std::string canonical_bytes(const RoleCertificate& cert);

[[nodiscard]] Fingerprint fingerprint(const RoleCertificate& cert);

/// Self-signed when `issuer_cert` is null: the subject key is the issuer's own key.
/// Throws error(invalid_validity) unless not_before < not_after.
[[nodiscard]] RoleCertificate issue_certificate(const Signer& issuer, const RoleCertificate* issuer_cert,
                                                const PublicKey& subject_key, std::string subject_name,
                                                std::string role_name, Validity validity);

/// Signature over tbs_bytes checks out under the cert's own key.
[[nodiscard]] bool verify_self_signed(const RoleCertificate& cert);
/// Issuer fingerprint matches and the signature checks out under the issuer's key.
[[nodiscard]] bool verify_issued_by(const RoleCertificate& cert, const RoleCertificate& issuer);

/// `.cert.xml` files hold the canonical XML.
void save_certificate(const std::filesystem::path& path, const RoleCertificate& cert);
[[nodiscard]] RoleCertificate load_certificate(const std::filesystem::path& path);

} // namespace sda::crypto

template <>
struct std::hash<sda::crypto::Fingerprint> {
    std::size_t operator()(const sda::crypto::Fingerprint& fp) const noexcept {
        return std::hash<std::string>{}(fp.hex());
    }
};
