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

#include "sda/proto/envelope.hpp"

#include "sda/common/error.hpp"
#include "sda/crypto/encoding.hpp"

namespace sda::proto {

namespace {

constexpr std::size_t kNonceBytes = 16;

xml::Element renamed(const xml::Element& source, std::string name) {
    xml::Element out{std::move(name)};
    for (const auto& [k, v] : source.attributes()) {
        out.set(k, v);
    }
    if (!source.text().empty()) out.set_text(source.text());
    for (const auto& c : source.children()) {
        out.add(c);
    }
    return out;
}

void check_nonce(const std::string& nonce) {
    if (nonce.size() != 2 * kNonceBytes || nonce.find_first_not_of("0123456789abcdef") != std::string::npos) {
        throw error(errc::malformed, "nonce must be 32 lowercase hex characters");
    }
}

} // namespace

std::string_view to_string(Status s) noexcept {
    switch (s) {
    case Status::ok:
        return "OK";
    case Status::denied:
        return "DENIED";
    case Status::error:
        return "ERROR";
    }
    return "ERROR";
}

Status parse_status(std::string_view text) {
    if (text == "OK") return Status::ok;
    if (text == "DENIED") return Status::denied;
    if (text == "ERROR") return Status::error;
    throw error(errc::malformed, "unknown status " + std::string(text));
}

std::string signed_bytes(const CommandEnvelope& env) {
    xml::Element info{"command-info"};
    info.set("proto", std::string(kProtocolVersion));
    info.set("kind", std::string(to_string(env.kind)));
    info.set("nonce", env.nonce);
    info.set("issued-at", format_timestamp(env.issued_at));
    info.add(renamed(env.body, "body"));
    return xml::canonicalize(info);
}

std::string signed_bytes(const ResponseEnvelope& resp) {
    xml::Element info{"response-info"};
    info.set("proto", std::string(kProtocolVersion));
    info.set("in-reply-to", resp.in_reply_to);
    info.set("status", std::string(to_string(resp.status)));
    info.set("error", resp.error_code);
    info.add(renamed(resp.payload, "payload"));
    return xml::canonicalize(info);
}

CommandEnvelope build_envelope(CommandKind kind, xml::Element body, const crypto::KeystoreSession& session,
                               Timestamp now) {
    CommandEnvelope env;
    env.kind = kind;
    env.body = renamed(body, "body");
    env.nonce = crypto::random_hex(kNonceBytes);
    env.issued_at = now;
    env.certificate = session.certificate();
    env.signature = session.sign_block(signed_bytes(env), std::nullopt, now);
    return env;
}

CommandEnvelope build_envelope(CommandKind kind, xml::Element body, crypto::SoftKeystore& keystore,
                               std::string_view pin, Timestamp now) {
    auto session = keystore.open(pin);
    return build_envelope(kind, std::move(body), session, now);
}

bool NonceCache::check_and_record(const crypto::Fingerprint& sender, const std::string& nonce, Timestamp issued_at,
                                  Timestamp now, std::chrono::seconds window) {
    std::lock_guard lock(mutex_);
    // An entry can only collide while its issued_at is still acceptable,
    // so anything older than the window around `now` is dead weight.
    std::erase_if(seen_, [&](const auto& item) { return item.second + window < now - window; });
    return seen_.try_emplace({sender, nonce}, issued_at).second;
}

std::size_t NonceCache::size() const {
    std::lock_guard lock(mutex_);
    return seen_.size();
}

crypto::Fingerprint verify_envelope(const CommandEnvelope& env, Timestamp now, NonceCache& cache,
                                    std::chrono::seconds window) {
    auto fp = crypto::fingerprint(env.certificate);
    auto report = crypto::verify_signature(env.certificate, signed_bytes(env), env.signature);
    if (!report.valid) {
        throw error(errc::bad_envelope_signature, std::string(crypto::to_string(report.reason)));
    }
    if (!env.certificate.valid_at(now)) {
        throw error(errc::expired_certificate, fp.prefix());
    }
    auto skew = env.issued_at > now ? env.issued_at - now : now - env.issued_at;
    if (skew > window) {
        throw error(errc::stale_timestamp, format_timestamp(env.issued_at));
    }
    if (!cache.check_and_record(fp, env.nonce, env.issued_at, now, window)) {
        throw error(errc::replay, env.nonce);
    }
    return fp;
}

ResponseEnvelope make_response(const std::string& in_reply_to, Status status, std::string error_code,
                               xml::Element payload, const crypto::KeystoreSession& platform, Timestamp now) {
    ResponseEnvelope resp;
    resp.in_reply_to = in_reply_to;
    resp.status = status;
    resp.error_code = std::move(error_code);
    resp.payload = renamed(payload, "payload");
    resp.signature = platform.sign_block(signed_bytes(resp), std::nullopt, now);
    return resp;
}

void verify_response(const ResponseEnvelope& resp, const crypto::RoleCertificate& platform_cert) {
    auto report = crypto::verify_signature(platform_cert, signed_bytes(resp), resp.signature);
    if (!report.valid) {
        throw error(errc::bad_response_signature, std::string(crypto::to_string(report.reason)));
    }
}

xml::Element to_xml(const CommandEnvelope& env) {
    xml::Element e{"command"};
    e.set("proto", std::string(kProtocolVersion));
    e.set("kind", std::string(to_string(env.kind)));
    e.set("nonce", env.nonce);
    e.set("issued-at", format_timestamp(env.issued_at));
    e.add(renamed(env.body, "body"));
    e.add(crypto::to_xml(env.certificate));
    e.add(crypto::to_xml(env.signature));
    return e;
}

xml::Element to_xml(const ResponseEnvelope& resp) {
    xml::Element e{"response"};
    e.set("proto", std::string(kProtocolVersion));
    e.set("in-reply-to", resp.in_reply_to);
    e.set("status", std::string(to_string(resp.status)));
    e.set("error", resp.error_code);
    e.add(renamed(resp.payload, "payload"));
    e.add(crypto::to_xml(resp.signature));
    return e;
}

CommandEnvelope command_from_xml(const xml::Element& e) {
    if (e.name() != "command") throw error(errc::malformed, "expected <command>, got <" + e.name() + ">");
    if (e.required_attr("proto") != kProtocolVersion) throw error(errc::malformed, "unsupported proto version");
    CommandEnvelope env;
    env.kind = parse_command_kind(e.required_attr("kind"));
    env.nonce = e.required_attr("nonce");
    check_nonce(env.nonce);
    env.issued_at = parse_timestamp(e.required_attr("issued-at"));
    env.body = e.required_child("body");
    env.certificate = crypto::certificate_from_xml(e.required_child("certificate"));
    env.signature = crypto::signature_from_xml(e.required_child("signature"));
    if (e.children().size() != 3) throw error(errc::malformed, "unexpected elements in <command>");
    return env;
}

ResponseEnvelope response_from_xml(const xml::Element& e) {
    if (e.name() != "response") throw error(errc::malformed, "expected <response>, got <" + e.name() + ">");
    if (e.required_attr("proto") != kProtocolVersion) throw error(errc::malformed, "unsupported proto version");
    ResponseEnvelope resp;
    resp.in_reply_to = e.required_attr("in-reply-to");
    resp.status = parse_status(e.required_attr("status"));
    resp.error_code = e.required_attr("error");
    resp.payload = e.required_child("payload");
    resp.signature = crypto::signature_from_xml(e.required_child("signature"));
    if (e.children().size() != 2) throw error(errc::malformed, "unexpected elements in <response>");
    return resp;
}

} // namespace sda::proto
