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
 * @file master_db.hpp
 * @brief Authoritative visit registry, backed by SQLite.
 *
 * Every mutation runs in its own transaction under one writer lock.
 * Versions grow by one on each accepted change to a visit.
 */

#pragma once

#include "sda/medreg/model.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>

struct sqlite3;

namespace sda::medreg {

inline constexpr std::chrono::hours kDefaultLeaseTtl{24};

/// Link between a visit and the e-MR stored for it.
struct EmrLink {
    std::string visit_id;
    std::string content_digest;
    std::string doc_id;
};

class MasterDb {
public:
    /// Opens or creates the database file (":memory:" for a private in-memory store).
    /// Throws error(storage).
    explicit MasterDb(const std::string& path);
    ~MasterDb();
    MasterDb(const MasterDb&) = delete;
    MasterDb& operator=(const MasterDb&) = delete;

    void add_principal(const Principal& p);
    [[nodiscard]] std::optional<Principal> principal(const std::string& id) const;

    /// Throws error(bad_date) / error(unknown_physician).
    [[nodiscard]] std::string register_visit(const NewVisit& visit);
    [[nodiscard]] std::optional<VisitRecord> visit(const std::string& visit_id) const;
    /// Throws error(unknown_visit).
    [[nodiscard]] VisitRecord require_visit(const std::string& visit_id) const;
    /// Empty physician_id lists every physician's visits for the day.
    [[nodiscard]] std::vector<VisitRecord> visits_on(const std::string& date, const std::string& physician_id) const;
    [[nodiscard]] std::vector<VisitRecord> all_visits() const;

    /// Snapshot of the physician's visits for `date`, leasing each of them.
    /// A lease still held by someone else is error(lease_held_by_other).
    [[nodiscard]] Snapshot checkout(const std::string& physician_id, const std::string& date, Timestamp now,
                                    std::chrono::seconds ttl = kDefaultLeaseTtl);
    [[nodiscard]] std::optional<std::pair<std::string, Timestamp>> lease(const std::string& visit_id) const;

    /// Each item is accepted iff the pusher holds a live lease and the base version matches.
    [[nodiscard]] std::vector<PushResult> push(const std::string& physician_id, const std::vector<PushItem>& items,
                                               Timestamp now);

    /// Back-office correction of a diagnosis; bumps the version like any accepted change.
    std::int64_t amend_diagnosis(const std::string& visit_id, const std::string& text);

    void record_pending_emr(const std::string& visit_id, const std::string& content_digest, Timestamp now);
    [[nodiscard]] std::optional<std::string> pending_visit_for(const std::string& content_digest) const;
    [[nodiscard]] std::optional<EmrLink> emr_link(const std::string& visit_id) const;
    /// diagnosed -> processed, with link and history entry. Throws error(not_diagnosed)
    /// or error(already_processed).
    void mark_processed(const std::string& visit_id, const std::string& content_digest, const std::string& doc_id);

    void add_history(const HistoryEntry& entry);
    [[nodiscard]] std::vector<HistoryEntry> history(const std::string& patient_code) const;

    /// Invariant violations, one line each; empty when the store is consistent.
    [[nodiscard]] std::vector<std::string> audit() const;

private:
    struct Tx;
    sqlite3* db_ = nullptr;
    mutable std::recursive_mutex mutex_;
};

} // namespace sda::medreg
