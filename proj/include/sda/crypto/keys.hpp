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

#include "sda/crypto/encoding.hpp"

#include <array>
#include <string_view>

namespace sda::crypto {

inline constexpr std::string_view kSignatureAlgorithm = "ed25519";

using PublicKey = std::array<std::uint8_t, 32>;
using SignatureValue = std::array<std::uint8_t, 64>;

/// Anything that can produce Ed25519 signatures without exposing its secret.
class Signer {
public:
    virtual ~Signer() = default;
    [[nodiscard]] virtual const PublicKey& public_key() const noexcept = 0;
    [[nodiscard]] virtual SignatureValue sign(std::string_view message) const = 0;
};

/// Ed25519 key pair. The secret half is wiped on destruction.
class KeyPair final : public Signer {
public:
    /// Fresh key pair from the OS entropy source. Throws error(entropy_failure).
    [[nodiscard]] static KeyPair generate();
    /// Rebuild from a 64-byte libsodium secret key (seed || public key).
    [[nodiscard]] static KeyPair from_secret(const Bytes& secret);

    KeyPair(const KeyPair&) = delete;
    KeyPair& operator=(const KeyPair&) = delete;
    KeyPair(KeyPair&& other) noexcept;
    KeyPair& operator=(KeyPair&& other) noexcept;
    ~KeyPair() override;

    [[nodiscard]] const PublicKey& public_key() const noexcept override { return public_; }
    [[nodiscard]] SignatureValue sign(std::string_view message) const override;

    /// Only for sealing into a keystore file.
    [[nodiscard]] Bytes export_secret() const;

private:
    KeyPair() = default;

    PublicKey public_{};
    std::array<std::uint8_t, 64> secret_{};
};

[[nodiscard]] bool verify_detached(const PublicKey& key, std::string_view message, const SignatureValue& sig);

} // namespace sda::crypto
