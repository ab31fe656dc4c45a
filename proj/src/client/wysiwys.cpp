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

#include "sda/client/wysiwys.hpp"

#include "sda/common/error.hpp"
#include "sda/crypto/encoding.hpp"

namespace sda::client {

edoc::EDoc wysiwys_sign(edoc::EDoc doc, const edoc::RenderedView& view, crypto::SoftKeystore& keystore,
                        std::string_view pin, const Confirm& confirm, Timestamp now) {
    auto shown = crypto::sha256(view.text);
    if (shown != view.view_digest) {
        throw error(errc::malformed, "view digest does not match the displayed text");
    }
    if (!confirm(view)) throw error(errc::user_abort, "signature declined at review");
    auto block = crypto::sign_bytes(keystore, pin, edoc::content_bytes(doc),
                                    crypto::ViewBinding{view.stylesheet_id, shown}, now);
    return edoc::attach_signature(std::move(doc), std::move(block), keystore.certificate());
}

std::string confirmation_code() {
    static constexpr std::string_view kAlphabet = "ABCDEFGHJKMNPQRSTUVWXYZ23456789";
    std::string code;
    for (auto b : crypto::random_bytes(6)) {
        code.push_back(kAlphabet[b % kAlphabet.size()]);
    }
    return code;
}

} // namespace sda::client
