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
 * @file light_db.hpp
 * @brief A physician's offline replica: the day's leased visits, history
 *        extracts and signed e-MRs waiting for upload. One canonical XML file.
 */

#pragma once

#include "sda/edoc/edoc.hpp"
#include "sda/medreg/model.hpp"

#include <filesystem>

namespace sda::medreg {

struct LocalVisit {
    VisitRecord record;              ///< version is the master version the edit is based on
    std::int64_t local_revision = 0;  ///< bumped on every local edit
    bool dirty = false;               ///< edited locally and not yet accepted by the master
    bool stale = false;               ///< master refused the last push; needs a fresh checkout
};

struct PendingEmr {
    std::string visit_id;
    edoc::EDoc doc;
    std::optional<std::string> doc_id;  ///< set once the upload is acknowledged
};

struct LightDb {
    std::string physician_id;
    std::string visit_date;
    Timestamp snapshot_time;
    std::vector<LocalVisit> visits;
    std::vector<HistoryEntry> history;
    std::vector<PendingEmr> pending;

    [[nodiscard]] LocalVisit* find(const std::string& visit_id);
    [[nodiscard]] const LocalVisit* find(const std::string& visit_id) const;
};

[[nodiscard]] xml::Element to_xml(const LightDb& db);
[[nodiscard]] LightDb light_db_from_xml(const xml::Element& e);

/// Missing file yields nullopt. Throws error(malformed) for a damaged file.
[[nodiscard]] std::optional<LightDb> load_light_db(const std::filesystem::path& path);
void save_light_db(const std::filesystem::path& path, const LightDb& db);

/// Replaces the replica with a fresh snapshot, keeping local edits whose base
/// version still matches. Throws error(validation_failed) when unsynced edits
/// would be dropped (other physician, other day, or visit gone).
[[nodiscard]] LightDb apply_snapshot(std::optional<LightDb> current, const Snapshot& snap);

/// Offline edit. Throws error(unknown_visit), error(validation_failed) for empty
/// text, error(already_processed) once the e-MR is stored.
void record_diagnosis(LightDb& db, const std::string& visit_id, const std::string& text);

[[nodiscard]] std::vector<PushItem> push_items(const LightDb& db);
/// Rebases accepted visits to the master version and flags refused ones stale.
void apply_push_results(LightDb& db, const std::vector<PushItem>& pushed, const std::vector<PushResult>& results);

void add_pending(LightDb& db, const std::string& visit_id, edoc::EDoc signed_doc);
void acknowledge_upload(LightDb& db, const std::string& visit_id, const std::string& doc_id);
/// Removes an acknowledged e-MR, named by doc id or visit id. Throws error(not_uploaded).
void purge_signed(LightDb& db, const std::string& id);

} // namespace sda::medreg
