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

#include "sda/crypto/signature.hpp"

#include "sda/common/error.hpp"

#include <algorithm>

namespace sda::crypto {

std::string signed_info_bytes(const SignatureBlock& block) {
    xml::Element info("signed-info");
    info.set("alg", block.algorithm_id);
    info.set("c14n", block.canonicalization_id);
    info.set("signed-at", format_timestamp(block.signed_at));
    info.add_leaf("content-digest", block.content_digest.hex());
    auto& view = info.add_leaf("view-digest", block.view ? block.view->view_digest.hex() : std::string());
    view.set("stylesheet", block.view ? block.view->stylesheet_id : std::string());
    return xml::canonicalize(info);
}

xml::Element to_xml(const SignatureBlock& block) {
    xml::Element e("signature");
    e.set("signer", block.signer_fingerprint.hex());
    e.set("alg", block.algorithm_id);
    e.set("c14n", block.canonicalization_id);
    e.set("signed-at", format_timestamp(block.signed_at));
    e.add_leaf("content-digest", block.content_digest.hex());
    if (block.view) {
        e.add_leaf("view-binding", block.view->view_digest.hex()).set("stylesheet", block.view->stylesheet_id);
    }
    e.add_leaf("value", to_base64(Bytes(block.signature_value.begin(), block.signature_value.end())));
    return e;
}

SignatureBlock signature_from_xml(const xml::Element& e) {
    if (e.name() != "signature") {
        throw error(errc::malformed, "expected <signature>");
    }
    SignatureBlock block;
    block.signer_fingerprint = Fingerprint::from_hex(e.required_attr("signer"));
    block.algorithm_id = e.required_attr("alg");
    block.canonicalization_id = e.required_attr("c14n");
    block.signed_at = parse_timestamp(e.required_attr("signed-at"));
    block.content_digest = Digest::from_hex(e.required_child("content-digest").text());
    if (const auto* view = e.child("view-binding")) {
        ViewBinding binding{view->required_attr("stylesheet"), Digest::from_hex(view->text())};
        if (binding.stylesheet_id.empty()) {
            throw error(errc::malformed, "view binding without stylesheet id");
        }
        block.view = std::move(binding);
    }
    auto value = from_base64(e.required_child("value").text());
    if (value.size() != block.signature_value.size()) {
        throw error(errc::malformed, "signature value has wrong length");
    }
    std::copy(value.begin(), value.end(), block.signature_value.begin());
    return block;
}

SignatureBlock make_signature_block(const Signer& signer, const Fingerprint& signer_fingerprint,
                                    std::string_view message, const std::optional<ViewBinding>& view,
                                    Timestamp signed_at) {
    if (view && view->stylesheet_id.empty()) {
        throw error(errc::malformed, "view binding without stylesheet id");
    }
    SignatureBlock block;
    block.signer_fingerprint = signer_fingerprint;
    block.signed_at = signed_at;
    block.content_digest = sha256(message);
    block.view = view;
    block.signature_value = signer.sign(signed_info_bytes(block));
    return block;
}

std::string_view to_string(VerifyReason reason) noexcept {
    switch (reason) {
    case VerifyReason::ok: return "OK";
    case VerifyReason::fingerprint_mismatch: return "FINGERPRINT_MISMATCH";
    case VerifyReason::digest_mismatch: return "DIGEST_MISMATCH";
    case VerifyReason::bad_signature: return "BAD_SIGNATURE";
    case VerifyReason::unsupported_algorithm: return "UNSUPPORTED_ALGORITHM";
    }
    return "BAD_SIGNATURE";
}

VerificationReport verify_signature(const RoleCertificate& cert, std::string_view content,
                                    const SignatureBlock& block) {
    if (block.signer_fingerprint != fingerprint(cert)) {
        return {false, VerifyReason::fingerprint_mismatch};
    }
    if (block.algorithm_id != kSignatureAlgorithm || block.canonicalization_id != kCanonicalizationId) {
        return {false, VerifyReason::unsupported_algorithm};
    }
    if (sha256(content) != block.content_digest) {
        return {false, VerifyReason::digest_mismatch};
    }
    if (!verify_detached(cert.public_key, signed_info_bytes(block), block.signature_value)) {
        return {false, VerifyReason::bad_signature};
    }
    return {true, VerifyReason::ok};
}

} // namespace sda::crypto
