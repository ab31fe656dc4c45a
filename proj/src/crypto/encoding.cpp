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

#include "sda/crypto/encoding.hpp"

#include "sda/common/error.hpp"

#include <sodium.h>

namespace sda::crypto {

void ensure_sodium() {
    static const int rc = sodium_init();
    if (rc < 0) {
        throw error(errc::entropy_failure, "libsodium initialisation failed");
    }
}

std::string to_hex(const std::uint8_t* data, std::size_t size) {
    std::string out(size * 2 + 1, '\0');
    sodium_bin2hex(out.data(), out.size(), data, size);
    out.pop_back();
    return out;
}

std::string to_hex(const Bytes& data) { return to_hex(data.data(), data.size()); }

Bytes from_hex(std::string_view hex) {
    if (hex.size() % 2 != 0) {
        throw error(errc::malformed, "odd-length hex string");
    }
    Bytes out(hex.size() / 2);
    std::size_t written = 0;
    const char* end = nullptr;
    if (sodium_hex2bin(out.data(), out.size(), hex.data(), hex.size(), nullptr, &written, &end) != 0 ||
        written != out.size() || end != hex.data() + hex.size()) {
        throw error(errc::malformed, "invalid hex string");
    }
    return out;
}

std::string to_base64(const Bytes& data) {
    constexpr int variant = sodium_base64_VARIANT_ORIGINAL;
    std::string out(sodium_base64_ENCODED_LEN(data.size(), variant), '\0');
    sodium_bin2base64(out.data(), out.size(), data.data(), data.size(), variant);
    out.pop_back();
    return out;
}

Bytes from_base64(std::string_view text) {
    Bytes out(text.size() / 4 * 3 + 3);
    std::size_t written = 0;
    const char* end = nullptr;
    if (sodium_base642bin(out.data(), out.size(), text.data(), text.size(), nullptr, &written, &end,
                          sodium_base64_VARIANT_ORIGINAL) != 0 ||
        end != text.data() + text.size()) {
        throw error(errc::malformed, "invalid base64");
    }
    out.resize(written);
    return out;
}

Bytes random_bytes(std::size_t size) {
    ensure_sodium();
    Bytes out(size);
    randombytes_buf(out.data(), out.size());
    return out;
}

std::string random_hex(std::size_t size) { return to_hex(random_bytes(size)); }

} // namespace sda::crypto
