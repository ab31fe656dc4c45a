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
 * @file model.hpp
 * @brief Visit registry records shared by the master store, the light-db
 *        replica and the HTTP facade.
 */

#pragma once

#include "sda/common/error.hpp"
#include "sda/common/time.hpp"
#include "sda/xml/xml.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sda::medreg {

enum class VisitStatus { reserved, diagnosed, processed };
enum class Origin { internal, external };
enum class PrincipalRole { physician, registrar, admin };

[[nodiscard]] std::string_view to_string(VisitStatus s) noexcept;
[[nodiscard]] std::string_view to_string(Origin o) noexcept;
[[nodiscard]] std::string_view to_string(PrincipalRole r) noexcept;
/// Each throws error(malformed) on an unknown spelling.
[[nodiscard]] VisitStatus parse_visit_status(std::string_view text);
[[nodiscard]] Origin parse_origin(std::string_view text);
[[nodiscard]] PrincipalRole parse_principal_role(std::string_view text);

/// Statuses only move forward: reserved, diagnosed, processed.
[[nodiscard]] constexpr int rank(VisitStatus s) noexcept { return static_cast<int>(s); }

struct Patient {
    std::string name;
    std::string surname;
    std::string patient_code;
    Origin origin = Origin::internal;

    bool operator==(const Patient&) const = default;
};

struct NewVisit {
    Patient patient;
    std::string exam_type;
    std::string visit_date;  ///< YYYY-MM-DD
    std::string physician_id;
    std::optional<std::string> room;
};

struct VisitRecord {
    std::string visit_id;
    Patient patient;
    std::string exam_type;
    std::string visit_date;
    std::string physician_id;
    std::optional<std::string> room;
    VisitStatus status = VisitStatus::reserved;
    std::optional<std::string> diagnosis;
    std::optional<std::string> emr_doc_id;
    std::int64_t version = 0;

    bool operator==(const VisitRecord&) const = default;
};

/// One earlier examination of a patient.
struct HistoryEntry {
    std::string patient_code;
    std::string visit_date;
    std::string exam_type;
    std::string diagnosis;
    std::optional<std::string> emr_doc_id;

    bool operator==(const HistoryEntry&) const = default;
};

struct Principal {
    std::string id;
    PrincipalRole role = PrincipalRole::physician;
    std::string display_name;
    std::string certificate_xml;  ///< canonical role certificate used for session proofs
};

/// What a physician downloads for one day.
struct Snapshot {
    std::string physician_id;
    std::string visit_date;
    Timestamp taken_at;
    std::vector<VisitRecord> visits;
    std::vector<HistoryEntry> history;
};

/// A locally diagnosed visit offered back to the master store.
struct PushItem {
    std::string visit_id;
    std::int64_t base_version = 0;
    std::string diagnosis;
};

enum class PushOutcome { ok, stale_version, not_lease_holder };
[[nodiscard]] std::string_view to_string(PushOutcome o) noexcept;
[[nodiscard]] PushOutcome parse_push_outcome(std::string_view text);

struct PushResult {
    std::string visit_id;
    PushOutcome outcome = PushOutcome::ok;
    std::int64_t master_version = 0;  ///< version after the push (unchanged when refused)
};

/// Throws error(bad_date) unless `date` is a real YYYY-MM-DD day.
void require_date(std::string_view date);

[[nodiscard]] xml::Element to_xml(const VisitRecord& v);
[[nodiscard]] VisitRecord visit_from_xml(const xml::Element& e);
[[nodiscard]] xml::Element to_xml(const HistoryEntry& h);
[[nodiscard]] HistoryEntry history_from_xml(const xml::Element& e);

} // namespace sda::medreg
