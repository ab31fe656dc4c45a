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

#include "sda/crypto/hash.hpp"

#include "sda/common/error.hpp"
#include "sda/crypto/encoding.hpp"

#include <sodium.h>

#include <algorithm>

namespace sda::crypto {

std::string Digest::hex() const { return to_hex(bytes.data(), bytes.size()); }

Digest Digest::from_hex(std::string_view text) {
    if (text.size() != 64) {
        throw error(errc::malformed, "digest must be 64 hex characters");
    }
    auto raw = crypto::from_hex(text);
    Digest d;
    std::copy(raw.begin(), raw.end(), d.bytes.begin());
    return d;
}

Digest sha256(std::string_view data) {
    ensure_sodium();
    Digest d;
    crypto_hash_sha256(d.bytes.data(), reinterpret_cast<const unsigned char*>(data.data()), data.size());
    return d;
}

} // namespace sda::crypto
