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

#include "sda/crypto/keys.hpp"

#include "sda/common/error.hpp"

#include <sodium.h>

#include <algorithm>

namespace sda::crypto {

KeyPair KeyPair::generate() {
    ensure_sodium();
    KeyPair kp;
    if (crypto_sign_keypair(kp.public_.data(), kp.secret_.data()) != 0) {
        throw error(errc::entropy_failure, "key generation failed");
    }
    return kp;
}

KeyPair KeyPair::from_secret(const Bytes& secret) {
    ensure_sodium();
    if (secret.size() != crypto_sign_SECRETKEYBYTES) {
        throw error(errc::malformed, "secret key has wrong length");
    }
    KeyPair kp;
    std::copy(secret.begin(), secret.end(), kp.secret_.begin());
    crypto_sign_ed25519_sk_to_pk(kp.public_.data(), kp.secret_.data());
    return kp;
}

KeyPair::KeyPair(KeyPair&& other) noexcept : public_(other.public_), secret_(other.secret_) {
    sodium_memzero(other.secret_.data(), other.secret_.size());
}

KeyPair& KeyPair::operator=(KeyPair&& other) noexcept {
    if (this != &other) {
        public_ = other.public_;
        secret_ = other.secret_;
        sodium_memzero(other.secret_.data(), other.secret_.size());
    }
    return *this;
}

KeyPair::~KeyPair() { sodium_memzero(secret_.data(), secret_.size()); }

SignatureValue KeyPair::sign(std::string_view message) const {
    SignatureValue sig{};
    crypto_sign_detached(sig.data(), nullptr, reinterpret_cast<const unsigned char*>(message.data()),
                         message.size(), secret_.data());
    return sig;
}

Bytes KeyPair::export_secret() const { return Bytes(secret_.begin(), secret_.end()); }

bool verify_detached(const PublicKey& key, std::string_view message, const SignatureValue& sig) {
    ensure_sodium();
    return crypto_sign_verify_detached(sig.data(), reinterpret_cast<const unsigned char*>(message.data()),
                                       message.size(), key.data()) == 0;
}

} // namespace sda::crypto
