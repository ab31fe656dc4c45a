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

#include "sda/crypto/keystore.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"

#include <sodium.h>

#include <string>

namespace sda::crypto {
namespace {

struct WipedKey {
    std::array<std::uint8_t, crypto_secretbox_KEYBYTES> bytes{};
    ~WipedKey() { sodium_memzero(bytes.data(), bytes.size()); }
};

void derive(WipedKey& out, std::string_view pin, const Bytes& salt, const KdfLimits& limits) {
    if (crypto_pwhash(out.bytes.data(), out.bytes.size(), pin.data(), pin.size(), salt.data(), limits.ops,
                      limits.mem, crypto_pwhash_ALG_ARGON2ID13) != 0) {
        throw error(errc::internal, "PIN key derivation ran out of memory");
    }
}

} // namespace

KdfLimits KdfLimits::interactive() {
    return {crypto_pwhash_OPSLIMIT_INTERACTIVE, crypto_pwhash_MEMLIMIT_INTERACTIVE};
}

KdfLimits KdfLimits::minimal() { return {crypto_pwhash_OPSLIMIT_MIN, crypto_pwhash_MEMLIMIT_MIN}; }

SoftKeystore SoftKeystore::in_memory(const KeyPair& keys, RoleCertificate certificate, std::string_view pin,
                                     KdfLimits limits) {
    ensure_sodium();
    if (certificate.public_key != keys.public_key()) {
        throw error(errc::malformed_cert, "certificate does not carry this key pair's public key");
    }
    SoftKeystore ks;
    ks.pin_salt_ = random_bytes(crypto_pwhash_SALTBYTES);
    ks.limits_ = limits;
    ks.certificate_ = std::move(certificate);

    WipedKey wrap;
    derive(wrap, pin, ks.pin_salt_, limits);
    auto secret = keys.export_secret();
    Bytes nonce = random_bytes(crypto_secretbox_NONCEBYTES);
    ks.sealed_key_ = nonce;
    ks.sealed_key_.resize(nonce.size() + crypto_secretbox_MACBYTES + secret.size());
    crypto_secretbox_easy(ks.sealed_key_.data() + nonce.size(), secret.data(), secret.size(), nonce.data(),
                          wrap.bytes.data());
    sodium_memzero(secret.data(), secret.size());
    return ks;
}

SoftKeystore SoftKeystore::provision(const std::filesystem::path& path, const KeyPair& keys,
                                     RoleCertificate certificate, std::string_view pin, KdfLimits limits) {
    auto ks = in_memory(keys, std::move(certificate), pin, limits);
    ks.path_ = path;
    ks.persist();
    return ks;
}

SoftKeystore SoftKeystore::load(const std::filesystem::path& path) {
    auto ks = from_xml(xml::parse(read_file(path)));
    ks.path_ = path;
    return ks;
}

KeystoreSession SoftKeystore::open(std::string_view pin) {
    if (locked_) {
        throw error(errc::keystore_locked, "keystore locked after repeated PIN failures");
    }
    WipedKey wrap;
    derive(wrap, pin, pin_salt_, limits_);
    const std::size_t nonce_len = crypto_secretbox_NONCEBYTES;
    if (sealed_key_.size() <= nonce_len + crypto_secretbox_MACBYTES) {
        throw error(errc::malformed, "sealed key too short");
    }
    Bytes secret(sealed_key_.size() - nonce_len - crypto_secretbox_MACBYTES);
    if (crypto_secretbox_open_easy(secret.data(), sealed_key_.data() + nonce_len, sealed_key_.size() - nonce_len,
                                   sealed_key_.data(), wrap.bytes.data()) != 0) {
        ++failure_counter_;
        if (failure_counter_ >= kMaxPinFailures) {
            locked_ = true;
            persist();
            throw error(errc::locked_after_this_attempt, "third wrong PIN; keystore is now locked");
        }
        persist();
        throw error(errc::wrong_pin, std::to_string(kMaxPinFailures - failure_counter_) + " attempts left");
    }
    if (failure_counter_ != 0) {
        failure_counter_ = 0;
        persist();
    }
    auto keys = KeyPair::from_secret(secret);
    sodium_memzero(secret.data(), secret.size());
    return KeystoreSession(std::move(keys), certificate_);
}

xml::Element SoftKeystore::to_xml() const {
    xml::Element e("keystore");
    e.set("version", "1");
    e.add_leaf("encrypted-private-key", to_base64(sealed_key_));
    e.add_leaf("pin-salt", to_base64(pin_salt_));
    auto& kdf = e.add(xml::Element("kdf"));
    kdf.set("alg", "argon2id13");
    kdf.set("ops", std::to_string(limits_.ops));
    kdf.set("mem", std::to_string(limits_.mem));
    e.add_leaf("failure-counter", std::to_string(failure_counter_));
    e.add_leaf("locked", locked_ ? "true" : "false");
    e.add(crypto::to_xml(certificate_));
    return e;
}

SoftKeystore SoftKeystore::from_xml(const xml::Element& e) {
    if (e.name() != "keystore" || e.attr("version") != "1") {
        throw error(errc::malformed, "not a version-1 <keystore>");
    }
    SoftKeystore ks;
    ks.sealed_key_ = from_base64(e.required_child("encrypted-private-key").text());
    ks.pin_salt_ = from_base64(e.required_child("pin-salt").text());
    if (ks.pin_salt_.size() != crypto_pwhash_SALTBYTES) {
        throw error(errc::malformed, "PIN salt has wrong length");
    }
    const auto& kdf = e.required_child("kdf");
    if (kdf.attr("alg") != "argon2id13") {
        throw error(errc::malformed, "unsupported KDF");
    }
    try {
        ks.limits_.ops = std::stoull(kdf.required_attr("ops"));
        ks.limits_.mem = std::stoull(kdf.required_attr("mem"));
        ks.failure_counter_ = std::stoi(e.required_child("failure-counter").text());
    } catch (const std::logic_error&) {
        throw error(errc::malformed, "non-numeric keystore field");
    }
    const auto& locked = e.required_child("locked").text();
    if (locked != "true" && locked != "false") {
        throw error(errc::malformed, "locked must be true or false");
    }
    ks.locked_ = locked == "true";
    if (ks.failure_counter_ < 0 || ks.failure_counter_ > kMaxPinFailures) {
        throw error(errc::malformed, "failure counter out of range");
    }
    ks.certificate_ = certificate_from_xml(e.required_child("certificate"));
    return ks;
}

void SoftKeystore::persist() const {
    if (path_) {
        write_file_atomic(*path_, xml::canonicalize(to_xml()));
    }
}

KeystoreSession::KeystoreSession(KeyPair keys, RoleCertificate cert)
    : keys_(std::make_unique<KeyPair>(std::move(keys))),
      certificate_(std::move(cert)),
      fingerprint_(crypto::fingerprint(certificate_)) {}

SignatureBlock KeystoreSession::sign_block(std::string_view message, const std::optional<ViewBinding>& view,
                                           Timestamp signed_at) const {
    return make_signature_block(*this, fingerprint_, message, view, signed_at);
}

SignatureBlock sign_bytes(SoftKeystore& keystore, std::string_view pin, std::string_view message,
                          const std::optional<ViewBinding>& view, Timestamp signed_at) {
    return keystore.open(pin).sign_block(message, view, signed_at);
}

} // namespace sda::crypto
