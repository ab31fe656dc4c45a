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
 * @file envelope.hpp
 * @brief Signed command and response envelopes, and the replay guard.
 *
 * Command wire form:
 * @code
 *   <command issued-at="..." kind="GET_DOC" nonce="..." proto="1">
 *     <body>...</body> <certificate>...</certificate> <signature>...</signature>
 *   </command>
 * @endcode
 * The sender signs the canonical bytes of
 * `<command-info issued-at kind nonce proto><body/></command-info>`.
 * Responses are signed the same way by the platform over
 * `<response-info error in-reply-to proto status><payload/></response-info>`.
 */

#pragma once

#include "sda/common/time.hpp"
#include "sda/crypto/keystore.hpp"
#include "sda/proto/command.hpp"

#include <chrono>
#include <map>
#include <mutex>
#include <string>
#include <utility>

namespace sda::proto {

inline constexpr std::string_view kProtocolVersion = "1";
inline constexpr std::chrono::seconds kDefaultReplayWindow{300};

struct CommandEnvelope {
    CommandKind kind = CommandKind::status;
    xml::Element body{"body"};
    std::string nonce;  ///< 32 lowercase hex characters
    Timestamp issued_at;
    crypto::RoleCertificate certificate;
    crypto::SignatureBlock signature;

    bool operator==(const CommandEnvelope&) const = default;
};

enum class Status { ok, denied, error };

[[nodiscard]] std::string_view to_string(Status s) noexcept;
[[nodiscard]] Status parse_status(std::string_view text);

struct ResponseEnvelope {
    std::string in_reply_to;
    Status status = Status::ok;
    std::string error_code;  ///< empty when status is ok
    xml::Element payload{"payload"};
    crypto::SignatureBlock signature;

    bool operator==(const ResponseEnvelope&) const = default;
};

[[nodiscard]] std::string signed_bytes(const CommandEnvelope& env);
[[nodiscard]] std::string signed_bytes(const ResponseEnvelope& resp);

/// Builds and signs a command with an already-unlocked keystore session.
[[nodiscard]] CommandEnvelope build_envelope(CommandKind kind, xml::Element body,
                                             const crypto::KeystoreSession& session, Timestamp now = system_now());

/// PIN-checked variant; keystore errors propagate.
[[nodiscard]] CommandEnvelope build_envelope(CommandKind kind, xml::Element body, crypto::SoftKeystore& keystore,
                                             std::string_view pin, Timestamp now = system_now());

/// Thread-safe record of (sender, nonce) pairs seen inside the replay window.
class NonceCache {
public:
    /// Records the pair and returns true if it was unseen; atomic.
    bool check_and_record(const crypto::Fingerprint& sender, const std::string& nonce, Timestamp issued_at,
                          Timestamp now, std::chrono::seconds window);
    [[nodiscard]] std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::pair<crypto::Fingerprint, std::string>, Timestamp> seen_;
};

/// Returns the sender's fingerprint. Throws error(bad_envelope_signature),
/// error(expired_certificate), error(stale_timestamp) or error(replay).
/// The nonce is recorded only when every other check passed.
[[nodiscard]] crypto::Fingerprint verify_envelope(const CommandEnvelope& env, Timestamp now, NonceCache& cache,
                                                  std::chrono::seconds window = kDefaultReplayWindow);

[[nodiscard]] ResponseEnvelope make_response(const std::string& in_reply_to, Status status,
                                             std::string error_code, xml::Element payload,
                                             const crypto::KeystoreSession& platform, Timestamp now = system_now());

/// Throws error(bad_response_signature).
void verify_response(const ResponseEnvelope& resp, const crypto::RoleCertificate& platform_cert);

[[nodiscard]] xml::Element to_xml(const CommandEnvelope& env);
[[nodiscard]] xml::Element to_xml(const ResponseEnvelope& resp);
/// Throws error(malformed) or error(unknown_command).
[[nodiscard]] CommandEnvelope command_from_xml(const xml::Element& e);
[[nodiscard]] ResponseEnvelope response_from_xml(const xml::Element& e);

} // namespace sda::proto
