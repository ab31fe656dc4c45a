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
 * @file service.hpp
 * @brief The registration and e-MR workflow, sitting between the master store
 *        and the document platform.
 *
 * The service reaches the platform with its own credential. It never holds a
 * physician's signing key: e-MRs are signed by the physician and only
 * checked here.
 */

#pragma once

#include "sda/client/client.hpp"
#include "sda/medreg/master_db.hpp"

#include <memory>
#include <mutex>

namespace sda::medreg {

inline constexpr std::string_view kDefaultLocale = "en";

struct ServiceOptions {
    std::string emr_type = "medical-report";
    /// Stylesheet shown to the physician at signing time; when empty the
    /// platform picks one for `locale` (kDefaultLocale when that is empty too).
    std::optional<std::string> sign_stylesheet;
    std::optional<std::string> locale;
    /// Stylesheet used for printing; defaults to the signing one.
    std::optional<std::string> print_stylesheet;
    std::chrono::seconds lease_ttl = kDefaultLeaseTtl;
};

struct GeneratedEmr {
    std::string visit_id;
    edoc::EDoc doc;
    edoc::RenderedView view;  ///< platform rendering the physician must see before signing
};

struct StoredEmr {
    std::string visit_id;
    std::string doc_id;
    bool already_stored = false;
};

struct PrintedEmr {
    std::string doc_id;
    edoc::RenderedView view;
};

class MedregService {
public:
    MedregService(MasterDb& db, std::unique_ptr<client::Client> platform, ServiceOptions options,
                  Clock clock = system_clock());

    [[nodiscard]] MasterDb& db() noexcept { return db_; }
    [[nodiscard]] const ServiceOptions& options() const noexcept { return options_; }

    /// Registrars only. Throws error(denied), error(bad_date), error(unknown_physician).
    [[nodiscard]] std::string register_visit(const Principal& who, const NewVisit& visit);
    /// Physicians see their own day, registrars and admins everyone's. No leases taken.
    [[nodiscard]] std::vector<VisitRecord> worklist(const Principal& who, const std::string& date);
    /// Physicians only; leases the day's visits.
    [[nodiscard]] Snapshot checkout(const Principal& who, const std::string& date);
    [[nodiscard]] std::vector<PushResult> sync(const Principal& who, const std::vector<PushItem>& items);
    [[nodiscard]] std::vector<HistoryEntry> history(const Principal& who, const std::string& patient_code);

    /// CREATE_DOC with the five visit fields, plus the rendering to sign.
    /// Throws error(not_diagnosed), error(denied) for another physician's visit,
    /// error(platform_unavailable), client::PlatformError.
    [[nodiscard]] GeneratedEmr generate_emr(const Principal& who, const std::string& visit_id);
    /// Checks the physician's signature and the link to a generated e-MR, then
    /// stores it with the workflow attributes. Idempotent per (visit, content).
    /// Throws error(bad_signature), error(signer_mismatch), error(emr_mismatch),
    /// error(already_processed), error(not_diagnosed).
    [[nodiscard]] StoredEmr store_signed_emr(const Principal& who, const edoc::EDoc& signed_doc);
    [[nodiscard]] PrintedEmr print_emr(const Principal& who, const std::string& doc_id);

private:
    template <typename Fn>
    auto on_platform(Fn&& fn) -> decltype(fn(std::declval<client::Client&>()));
    void require(const Principal& who, std::initializer_list<PrincipalRole> roles, const char* action) const;
    [[nodiscard]] std::optional<std::string> locale_for(const std::optional<std::string>& stylesheet) const;

    MasterDb& db_;
    std::unique_ptr<client::Client> platform_;
    std::mutex platform_mutex_;
    std::mutex store_mutex_;
    ServiceOptions options_;
    Clock clock_;
};

/// Hex SHA-256 of the signed-content bytes; the key linking an e-MR to its visit.
[[nodiscard]] std::string content_digest(const edoc::EDoc& doc);

/// The five e-MR fields, taken verbatim from a visit record.
[[nodiscard]] std::map<std::string, std::string> emr_fields(const VisitRecord& v);

} // namespace sda::medreg
