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

#include "sda/common/time.hpp"
#include "sda/crypto/certificate.hpp"
#include "sda/crypto/hash.hpp"
#include "sda/xml/xml.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace sda::crypto {

inline constexpr std::string_view kCanonicalizationId = "sda-c14n-1";

/// WYSIWYS binding: which stylesheet produced the displayed text, and its digest.
struct ViewBinding {
    std::string stylesheet_id;
    Digest view_digest;

    bool operator==(const ViewBinding&) const = default;
};

struct SignatureBlock {
    Fingerprint signer_fingerprint;
    std::string algorithm_id{kSignatureAlgorithm};
    std::string canonicalization_id{kCanonicalizationId};
    Timestamp signed_at;
    Digest content_digest;
    std::optional<ViewBinding> view;
    SignatureValue signature_value{};

    bool operator==(const SignatureBlock&) const = default;
};

/// Canonical bytes the signature value is computed over.
[[nodiscard]] std::string signed_info_bytes(const SignatureBlock& block);

[[nodiscard]] xml::Element to_xml(const SignatureBlock& block);
/// Throws error(malformed).
[[nodiscard]] SignatureBlock signature_from_xml(const xml::Element& e);

/// Signs `message` (digest first) with `signer`, attributing it to `signer_fingerprint`.
[[nodiscard]] SignatureBlock make_signature_block(const Signer& signer, const Fingerprint& signer_fingerprint,
                                                  std::string_view message,
                                                  const std::optional<ViewBinding>& view, Timestamp signed_at);

enum class VerifyReason {
    ok,
    fingerprint_mismatch,
    digest_mismatch,
    bad_signature,
    unsupported_algorithm,
};

[[nodiscard]] std::string_view to_string(VerifyReason reason) noexcept;

struct VerificationReport {
    bool valid = false;
    VerifyReason reason = VerifyReason::bad_signature;
};

/// Never throws for verification failures; they are reported.
[[nodiscard]] VerificationReport verify_signature(const RoleCertificate& cert, std::string_view content,
                                                  const SignatureBlock& block);

} // namespace sda::crypto
