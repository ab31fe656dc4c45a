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
 * @file error.hpp
 * @brief Error codes shared by every layer, plus the exception that carries them.
 *
 * The upper-case spelling of each code is what travels on the wire
 * (response envelopes, facade bodies, CLI diagnostics).
 */

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sda {

#define SDA_ERRC_LIST(X)                                   \
    X(malformed, "MALFORMED")                              \
    X(unrepresentable, "UNREPRESENTABLE")                  \
    X(storage, "STORAGE")                                  \
    X(internal, "INTERNAL")                                \
    X(entropy_failure, "ENTROPY_FAILURE")                  \
    X(invalid_validity, "INVALID_VALIDITY")                \
    X(wrong_pin, "WRONG_PIN")                              \
    X(keystore_locked, "KEYSTORE_LOCKED")                  \
    X(locked_after_this_attempt, "LOCKED_AFTER_THIS_ATTEMPT") \
    X(malformed_cert, "MALFORMED_CERT")                    \
    X(type_mismatch, "TYPE_MISMATCH")                      \
    X(validation_failed, "VALIDATION_FAILED")              \
    X(bad_template, "BAD_TEMPLATE")                        \
    X(render_missing_field, "RENDER_MISSING_FIELD")        \
    X(non_verifying_block, "NON_VERIFYING_BLOCK")          \
    X(oversize_frame, "OVERSIZE_FRAME")                    \
    X(unknown_command, "UNKNOWN_COMMAND")                  \
    X(bad_envelope_signature, "BAD_ENVELOPE_SIGNATURE")    \
    X(replay, "REPLAY")                                    \
    X(stale_timestamp, "STALE_TIMESTAMP")                  \
    X(expired_certificate, "EXPIRED_CERTIFICATE")          \
    X(bad_response_signature, "BAD_RESPONSE_SIGNATURE")    \
    X(unreachable, "UNREACHABLE")                          \
    X(gateway_unreachable, "GATEWAY_UNREACHABLE")          \
    X(gateway_bad_response, "GATEWAY_BAD_RESPONSE")        \
    X(unknown_role, "UNKNOWN_ROLE")                        \
    X(command_not_allowed, "COMMAND_NOT_ALLOWED")          \
    X(type_not_allowed, "TYPE_NOT_ALLOWED")                \
    X(unsigned_doc, "UNSIGNED_DOC")                        \
    X(invalid_signature, "INVALID_SIGNATURE")              \
    X(unknown_port, "UNKNOWN_PORT")                        \
    X(unknown_doc, "UNKNOWN_DOC")                          \
    X(unknown_type, "UNKNOWN_TYPE")                        \
    X(unknown_stylesheet, "UNKNOWN_STYLESHEET")            \
    X(duplicate_definition, "DUPLICATE_DEFINITION")        \
    X(duplicate_stylesheet, "DUPLICATE_STYLESHEET")        \
    X(not_found, "NOT_FOUND")                              \
    X(immutable_attribute, "IMMUTABLE_ATTRIBUTE")          \
    X(startup, "STARTUP")                                  \
    X(user_abort, "USER_ABORT")                            \
    X(unresolved_fields, "UNRESOLVED_FIELDS")              \
    X(missing_input, "MISSING_INPUT")                      \
    X(offline, "OFFLINE")                                  \
    X(platform_unavailable, "PLATFORM_UNAVAILABLE")        \
    X(unauthenticated, "UNAUTHENTICATED")                  \
    X(denied, "DENIED")                                    \
    X(unknown_visit, "UNKNOWN_VISIT")                      \
    X(unknown_physician, "UNKNOWN_PHYSICIAN")              \
    X(bad_date, "BAD_DATE")                                \
    X(not_diagnosed, "NOT_DIAGNOSED")                      \
    X(already_processed, "ALREADY_PROCESSED")              \
    X(bad_signature, "BAD_SIGNATURE")                      \
    X(signer_mismatch, "SIGNER_MISMATCH")                  \
    X(emr_mismatch, "EMR_MISMATCH")                        \
    X(not_uploaded, "NOT_UPLOADED")                        \
    X(not_lease_holder, "NOT_LEASE_HOLDER")                \
    X(lease_held_by_other, "LEASE_HELD_BY_OTHER")          \
    X(stale_version, "STALE_VERSION")

enum class errc {
#define SDA_ERRC_ENUM(name, text) name,
    SDA_ERRC_LIST(SDA_ERRC_ENUM)
#undef SDA_ERRC_ENUM
};

[[nodiscard]] std::string_view to_string(errc code) noexcept;
[[nodiscard]] std::optional<errc> parse_errc(std::string_view text) noexcept;

class error : public std::runtime_error {
public:
    error(errc code, const std::string& detail);

    [[nodiscard]] errc code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

private:
    errc code_;
    std::string detail_;
};

} // namespace sda
