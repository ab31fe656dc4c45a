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
 * @file keystore.hpp
 * @brief PIN-protected software keystore with smart-card lockout semantics.
 *
 * The private key is sealed under a key derived from the PIN (Argon2id,
 * salted). A wrong PIN is detected by the seal failing to open. Three
 * consecutive failures lock the keystore until it is re-provisioned.
 * Counter and lock state are written back to the key file after every
 * attempt, so lockout survives process restarts.
 */

#pragma once

#include "sda/crypto/certificate.hpp"
#include "sda/crypto/signature.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string_view>

namespace sda::crypto {

inline constexpr int kMaxPinFailures = 3;

/// Cost parameters for the PIN-derived key.
struct KdfLimits {
    unsigned long long ops;
    std::size_t mem;

    /// libsodium's interactive profile; the default for real keystores.
    [[nodiscard]] static KdfLimits interactive();
    /// Lowest cost libsodium accepts; for test fixtures only.
    [[nodiscard]] static KdfLimits minimal();
};

class KeystoreSession;

class SoftKeystore {
public:
    /// Seal `keys` under `pin` and write the key file.
    [[nodiscard]] static SoftKeystore provision(const std::filesystem::path& path, const KeyPair& keys,
                                                RoleCertificate certificate, std::string_view pin,
                                                KdfLimits limits = KdfLimits::interactive());
    /// In-memory keystore (no backing file); lockout state lives only in the object.
    [[nodiscard]] static SoftKeystore in_memory(const KeyPair& keys, RoleCertificate certificate,
                                                std::string_view pin, KdfLimits limits = KdfLimits::minimal());
    /// Throws error(storage) / error(malformed).
    [[nodiscard]] static SoftKeystore load(const std::filesystem::path& path);

    [[nodiscard]] const RoleCertificate& certificate() const noexcept { return certificate_; }
    [[nodiscard]] Fingerprint fingerprint() const { return crypto::fingerprint(certificate_); }
    [[nodiscard]] int failure_counter() const noexcept { return failure_counter_; }
    [[nodiscard]] bool locked() const noexcept { return locked_; }
    [[nodiscard]] const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

    /// One PIN check; on success the session signs without further PIN entry.
    /// Throws error(keystore_locked), error(wrong_pin) or error(locked_after_this_attempt).
    [[nodiscard]] KeystoreSession open(std::string_view pin);

    [[nodiscard]] xml::Element to_xml() const;

private:
    SoftKeystore() = default;
    void persist() const;
    static SoftKeystore from_xml(const xml::Element& e);

    std::optional<std::filesystem::path> path_;
    Bytes sealed_key_;  // nonce || ciphertext
    Bytes pin_salt_;
    KdfLimits limits_{};
    int failure_counter_ = 0;
    bool locked_ = false;
    RoleCertificate certificate_;
};

/// Unlocked signing capability. Holds the secret only for its own lifetime.
class KeystoreSession final : public Signer {
public:
    [[nodiscard]] const PublicKey& public_key() const noexcept override { return keys_->public_key(); }
    [[nodiscard]] SignatureValue sign(std::string_view message) const override { return keys_->sign(message); }

    [[nodiscard]] const RoleCertificate& certificate() const noexcept { return certificate_; }
    [[nodiscard]] const Fingerprint& fingerprint() const noexcept { return fingerprint_; }

    [[nodiscard]] SignatureBlock sign_block(std::string_view message, const std::optional<ViewBinding>& view,
                                            Timestamp signed_at) const;

private:
    friend class SoftKeystore;
    KeystoreSession(KeyPair keys, RoleCertificate cert);

    std::unique_ptr<KeyPair> keys_;
    RoleCertificate certificate_;
    Fingerprint fingerprint_;
};

/// PIN check plus one signature. Same errors as SoftKeystore::open.
[[nodiscard]] SignatureBlock sign_bytes(SoftKeystore& keystore, std::string_view pin, std::string_view message,
                                        const std::optional<ViewBinding>& view = std::nullopt,
                                        Timestamp signed_at = system_now());

} // namespace sda::crypto
