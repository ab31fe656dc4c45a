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

#include "sda/crypto/certificate.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"
#include "sda/crypto/hash.hpp"

#include <algorithm>

namespace sda::crypto {
namespace {

template <std::size_t N>
std::array<std::uint8_t, N> fixed_bytes(const Bytes& raw, const char* what) {
    if (raw.size() != N) {
        throw error(errc::malformed_cert, std::string(what) + " has wrong length");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

xml::Element tbs_element(const RoleCertificate& cert) {
    xml::Element e("certificate");
    e.set("version", "1");
    e.add_leaf("serial", cert.serial);
    e.add_leaf("subject", cert.subject_name);
    e.add_leaf("role", cert.role_name);
    e.add_leaf("public-key", to_base64(Bytes(cert.public_key.begin(), cert.public_key.end())))
        .set("alg", std::string(kSignatureAlgorithm));
    e.add_leaf("issuer", cert.issuer_fingerprint ? cert.issuer_fingerprint->hex() : std::string());
    e.add_leaf("not-before", format_timestamp(cert.not_before));
    e.add_leaf("not-after", format_timestamp(cert.not_after));
    return e;
}

bool lower_hex(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

} // namespace

Fingerprint Fingerprint::from_hex(std::string_view hex) {
    if (hex.size() != 64 || !lower_hex(hex)) {
        throw error(errc::malformed, "fingerprint must be 64 lowercase hex characters");
    }
    Fingerprint fp;
    fp.hex_ = std::string(hex);
    return fp;
}

xml::Element to_xml(const RoleCertificate& cert) {
    auto e = tbs_element(cert);
    e.add_leaf("signature", to_base64(Bytes(cert.issuer_signature.begin(), cert.issuer_signature.end())));
    return e;
}

RoleCertificate certificate_from_xml(const xml::Element& e) {
    try {
        if (e.name() != "certificate" || e.attr("version") != "1") {
            throw error(errc::malformed_cert, "not a version-1 <certificate>");
        }
        RoleCertificate cert;
        cert.serial = e.required_child("serial").text();
        cert.subject_name = e.required_child("subject").text();
        cert.role_name = e.required_child("role").text();
        const auto& pk = e.required_child("public-key");
        if (pk.attr("alg") != std::string(kSignatureAlgorithm)) {
            throw error(errc::malformed_cert, "unsupported key algorithm");
        }
        cert.public_key = fixed_bytes<32>(from_base64(pk.text()), "public key");
        const auto& issuer = e.required_child("issuer").text();
        if (!issuer.empty()) {
            cert.issuer_fingerprint = Fingerprint::from_hex(issuer);
        }
        cert.not_before = parse_timestamp(e.required_child("not-before").text());
        cert.not_after = parse_timestamp(e.required_child("not-after").text());
        cert.issuer_signature = fixed_bytes<64>(from_base64(e.required_child("signature").text()), "signature");
        if (cert.serial.empty() || !(cert.not_before < cert.not_after)) {
            throw error(errc::malformed_cert, "empty serial or degenerate validity");
        }
        if (e.children().size() != 8) {
            throw error(errc::malformed_cert, "unexpected certificate elements");
        }
        return cert;
    } catch (const error& ex) {
        if (ex.code() == errc::malformed_cert) {
            throw;
        }
        throw error(errc::malformed_cert, ex.what());
    }
}

std::string tbs_bytes(const RoleCertificate& cert) { return xml::canonicalize(tbs_element(cert)); }

std::string canonical_bytes(const RoleCertificate& cert) { return xml::canonicalize(to_xml(cert)); }

Fingerprint fingerprint(const RoleCertificate& cert) {
    return Fingerprint::from_hex(sha256(canonical_bytes(cert)).hex());
}

RoleCertificate issue_certificate(const Signer& issuer, const RoleCertificate* issuer_cert,
                                  const PublicKey& subject_key, std::string subject_name,
                                  std::string role_name, Validity validity) {
    if (!(validity.not_before < validity.not_after)) {
        throw error(errc::invalid_validity, "not_before must precede not_after");
    }
    if (issuer_cert == nullptr && subject_key != issuer.public_key()) {
        throw error(errc::invalid_validity, "self-signed certificate must carry the issuer's key");
    }
    RoleCertificate cert;
    cert.serial = random_hex(16);
    cert.subject_name = std::move(subject_name);
    cert.role_name = std::move(role_name);
    cert.public_key = subject_key;
    if (issuer_cert != nullptr) {
        cert.issuer_fingerprint = fingerprint(*issuer_cert);
    }
    cert.not_before = validity.not_before;
    cert.not_after = validity.not_after;
    cert.issuer_signature = issuer.sign(tbs_bytes(cert));
    return cert;
}

bool verify_self_signed(const RoleCertificate& cert) {
    return cert.self_signed() && verify_detached(cert.public_key, tbs_bytes(cert), cert.issuer_signature);
}

bool verify_issued_by(const RoleCertificate& cert, const RoleCertificate& issuer) {
    return cert.issuer_fingerprint && *cert.issuer_fingerprint == fingerprint(issuer) &&
           verify_detached(issuer.public_key, tbs_bytes(cert), cert.issuer_signature);
}

void save_certificate(const std::filesystem::path& path, const RoleCertificate& cert) {
    write_file_atomic(path, canonical_bytes(cert));
}

RoleCertificate load_certificate(const std::filesystem::path& path) {
    return certificate_from_xml(xml::parse(read_file(path)));
}

} // namespace sda::crypto
