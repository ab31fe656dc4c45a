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
 * @file edoc.hpp
 * @brief E-doc instances: validation, creation, rendering, signing, verification.
 *
 * Signed content is the canonical form of
 * @code
 *   <edoc created="..." type="..." version="..."><fields>...</fields></edoc>
 * @endcode
 * i.e. the stored document minus its id, dynamic attributes and signature
 * blocks. Every signer therefore signs identical bytes, and attribute
 * edits on a stored document never disturb its signatures.
 */

#pragma once

#include "sda/common/error.hpp"
#include "sda/common/time.hpp"
#include "sda/crypto/signature.hpp"
#include "sda/edoc/definition.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sda::edoc {

struct EDoc {
    std::string doc_id;  ///< assigned by the document directory; empty before
    std::string type_name;
    int type_version = 1;
    std::map<std::string, std::string> field_values;
    std::map<std::string, std::string> attributes;
    std::vector<crypto::SignatureBlock> signatures;
    Timestamp created_at;

    bool operator==(const EDoc&) const = default;
};

enum class ViolationKind { missing_field, bad_value, unknown_field };

struct Violation {
    ViolationKind kind;
    std::string field;

    bool operator==(const Violation&) const = default;
};

/// e.g. "MISSING_FIELD(diagnosis)"
[[nodiscard]] std::string to_string(const Violation& v);

struct ValidationReport {
    bool ok = true;
    std::vector<Violation> violations;
};

class ValidationError : public error {
public:
    explicit ValidationError(ValidationReport report);
    [[nodiscard]] const ValidationReport& report() const noexcept { return report_; }

private:
    ValidationReport report_;
};

/// Throws error(type_mismatch) when doc and def disagree on the type name.
[[nodiscard]] ValidationReport validate_doc(const DocTypeDefinition& def, const EDoc& doc);

/// Applies defaults, NFC-normalises values and validates. Throws ValidationError.
[[nodiscard]] EDoc create_doc(const DocTypeDefinition& def, const std::map<std::string, std::string>& values,
                              Timestamp created_at = system_now());

/// Canonical bytes covered by content signatures.
[[nodiscard]] std::string content_bytes(const EDoc& doc);

[[nodiscard]] xml::Element to_xml(const EDoc& doc);
/// Throws error(malformed) / error(unrepresentable).
[[nodiscard]] EDoc doc_from_xml(const xml::Element& e);
[[nodiscard]] std::string serialize_doc(const EDoc& doc);
/// No partial document is ever returned; throws error(malformed).
[[nodiscard]] EDoc parse_doc(std::string_view bytes);

/// Dynamic attributes sit outside the signed content.
[[nodiscard]] EDoc set_attribute(EDoc doc, const std::string& name, std::string value);
[[nodiscard]] std::optional<std::string> get_attribute(const EDoc& doc, const std::string& name);

struct RenderedView {
    std::string stylesheet_id;
    std::string locale;
    std::string text;
    crypto::Digest view_digest;

    bool operator==(const RenderedView&) const = default;
};

/// Throws error(type_mismatch) / error(render_missing_field) / error(bad_template).
[[nodiscard]] RenderedView render(const EDoc& doc, const Stylesheet& sheet);

[[nodiscard]] xml::Element to_xml(const RenderedView& view);
[[nodiscard]] RenderedView view_from_xml(const xml::Element& e);

/// Appends `block` once it verifies under `signer` against the content bytes.
/// Throws error(non_verifying_block).
[[nodiscard]] EDoc attach_signature(EDoc doc, crypto::SignatureBlock block, const crypto::RoleCertificate& signer);

using CertificateMap = std::map<crypto::Fingerprint, crypto::RoleCertificate>;
using StylesheetLookup = std::function<std::optional<Stylesheet>(const std::string& stylesheet_id)>;

struct SignatureCheck {
    crypto::Fingerprint signer;
    bool valid = false;
    std::string reason;  ///< OK, UNKNOWN_SIGNER or a crypto::VerifyReason name
};

struct ViewBindingCheck {
    std::size_t signature_index = 0;
    std::string stylesheet_id;
    bool ok = false;
    std::string reason;  ///< OK, VIEW_MISMATCH, UNKNOWN_STYLESHEET, RENDER_FAILED
};

struct DocVerification {
    bool all_valid = false;  ///< at least one signature, and every check passed
    std::vector<SignatureCheck> per_signature;
    std::vector<ViewBindingCheck> view_binding_checks;
};

[[nodiscard]] DocVerification verify_doc(const EDoc& doc, const CertificateMap& certs,
                                         const StylesheetLookup& stylesheets);

[[nodiscard]] xml::Element to_xml(const DocVerification& report);
[[nodiscard]] DocVerification verification_from_xml(const xml::Element& e);

} // namespace sda::edoc
