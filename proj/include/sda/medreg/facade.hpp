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
 * @file facade.hpp
 * @brief HTTP/JSON front of the medreg service, plus the matching client.
 *
 * Endpoints:
 *   POST /session              challenge, then signed proof -> bearer token
 *   GET  /worklist?date=       physicians: checkout (leases); others: listing
 *   POST /visits               registrar only
 *   POST /sync                 409 when any item is refused
 *   POST /emr/generate         unsigned e-MR plus the rendering to sign
 *   POST /emr/store            physician-signed e-MR
 *   GET  /emr/{doc_id}/print
 *   GET  /history/{patient_code}
 *
 * Errors carry {"status", "error", "detail"}: 401 no session, 403 denial,
 * 404 unknown visit/doc, 409 version or lease conflict, 503 platform down,
 * 400 otherwise.
 */

#pragma once

#include "sda/crypto/keystore.hpp"
#include "sda/medreg/service.hpp"

#include <filesystem>

namespace sda::medreg {

struct FacadeOptions {
    std::chrono::seconds session_ttl{8 * 3600};
    std::chrono::seconds challenge_ttl{120};
    /// Served under "/" when set (the console's static files).
    std::optional<std::filesystem::path> static_dir;
};

class Facade {
public:
    Facade(MedregService& service, FacadeOptions options = {}, Clock clock = system_clock());
    ~Facade();
    Facade(const Facade&) = delete;
    Facade& operator=(const Facade&) = delete;

    /// Binds (port 0 picks one) and serves on a background thread. Throws error(startup).
    std::uint16_t start(const std::string& host, std::uint16_t port);
    /// Blocks on the calling thread.
    void run(const std::string& host, std::uint16_t port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// HTTP status the facade uses for an error code.
[[nodiscard]] int http_status_for(errc code, bool platform_denied);

/// An error reply from the facade.
class FacadeError : public error {
public:
    FacadeError(int http_status, std::string status, errc code, std::string code_text, const std::string& detail);
    [[nodiscard]] int http_status() const noexcept { return http_status_; }
    /// "DENIED/CODE" or "ERROR/CODE".
    [[nodiscard]] const std::string& verbatim() const noexcept { return verbatim_; }

private:
    int http_status_;
    std::string verbatim_;
};

struct SyncReply {
    int http_status = 200;
    std::vector<PushResult> results;
};

class FacadeClient {
public:
    /// `offline` simulates a disabled transport: every call fails with error(offline)
    /// without touching the network. A connection failure reports the same code.
    explicit FacadeClient(std::string base_url, bool offline = false);

    void login(const std::string& principal_id, const crypto::KeystoreSession& key, Timestamp now = system_now());
    [[nodiscard]] const std::string& token() const noexcept { return token_; }

    [[nodiscard]] std::string register_visit(const NewVisit& visit);
    [[nodiscard]] Snapshot worklist(const std::string& date);
    [[nodiscard]] SyncReply sync(const std::vector<PushItem>& items);
    [[nodiscard]] GeneratedEmr generate_emr(const std::string& visit_id);
    [[nodiscard]] StoredEmr store_emr(const edoc::EDoc& signed_doc);
    [[nodiscard]] PrintedEmr print_emr(const std::string& doc_id);
    [[nodiscard]] std::vector<HistoryEntry> history(const std::string& patient_code);

    /// Raw request for probing the surface; no error mapping.
    [[nodiscard]] std::pair<int, std::string> raw(const std::string& method, const std::string& path,
                                                  const std::string& body = {});

private:
    struct Reply;
    Reply send(const std::string& method, const std::string& path, const std::string& body, bool allow_409 = false);

    std::string base_url_;
    bool offline_;
    std::string token_;
};

} // namespace sda::medreg
