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

#include "sda/medreg/master_db.hpp"

#include <sqlite3.h>

#include <set>

namespace sda::medreg {

namespace {

constexpr const char* kSchema = R"sql(
PRAGMA foreign_keys = ON;
CREATE TABLE IF NOT EXISTS principals (
  id TEXT PRIMARY KEY,
  role TEXT NOT NULL CHECK (role IN ('physician', 'registrar', 'admin')),
  display_name TEXT NOT NULL,
  certificate TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS visits (
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  id TEXT UNIQUE,
  name TEXT NOT NULL,
  surname TEXT NOT NULL,
  patient_code TEXT NOT NULL,
  origin TEXT NOT NULL CHECK (origin IN ('internal', 'external')),
  exam_type TEXT NOT NULL,
  visit_date TEXT NOT NULL,
  physician_id TEXT NOT NULL REFERENCES principals(id),
  room TEXT,
  status TEXT NOT NULL CHECK (status IN ('reserved', 'diagnosed', 'processed')),
  diagnosis TEXT,
  emr_doc_id TEXT,
  version INTEGER NOT NULL CHECK (version >= 0)
);
CREATE INDEX IF NOT EXISTS visits_by_day ON visits (visit_date, physician_id);
CREATE TABLE IF NOT EXISTS leases (
  visit_id TEXT PRIMARY KEY REFERENCES visits(id),
  physician_id TEXT NOT NULL,
  expires_at INTEGER NOT NULL
);
CREATE TABLE IF NOT EXISTS history (
  seq INTEGER PRIMARY KEY AUTOINCREMENT,
  patient_code TEXT NOT NULL,
  visit_date TEXT NOT NULL,
  exam_type TEXT NOT NULL,
  diagnosis TEXT NOT NULL,
  emr_doc_id TEXT
);
CREATE INDEX IF NOT EXISTS history_by_patient ON history (patient_code);
CREATE TABLE IF NOT EXISTS pending_emr (
  visit_id TEXT NOT NULL REFERENCES visits(id),
  content_digest TEXT NOT NULL,
  created_at INTEGER NOT NULL,
  PRIMARY KEY (visit_id, content_digest)
);
CREATE TABLE IF NOT EXISTS emr_links (
  visit_id TEXT PRIMARY KEY REFERENCES visits(id),
  content_digest TEXT NOT NULL,
  doc_id TEXT NOT NULL UNIQUE
);
)sql";

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
    throw error(errc::storage, what + ": " + (db ? sqlite3_errmsg(db) : "no database"));
}

/// Prepared statement with positional text/int binding.
class Stmt {
public:
    Stmt(sqlite3* db, const char* sql) : db_(db) {
        if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare");
    }
    ~Stmt() { sqlite3_finalize(stmt_); }
    Stmt(const Stmt&) = delete;
    Stmt& operator=(const Stmt&) = delete;

    Stmt& bind(int i, const std::string& v) {
        check(sqlite3_bind_text(stmt_, i, v.data(), static_cast<int>(v.size()), SQLITE_TRANSIENT));
        return *this;
    }
    Stmt& bind(int i, const std::optional<std::string>& v) {
        if (!v) {
            check(sqlite3_bind_null(stmt_, i));
            return *this;
        }
        return bind(i, *v);
    }
    Stmt& bind(int i, std::int64_t v) {
        check(sqlite3_bind_int64(stmt_, i, v));
        return *this;
    }

    /// True while a row is available.
    bool step() {
        auto rc = sqlite3_step(stmt_);
        if (rc == SQLITE_ROW) return true;
        if (rc == SQLITE_DONE) return false;
        fail(db_, "step");
    }
    void run() {
        while (step()) {
        }
    }

    [[nodiscard]] std::string text(int col) const {
        const auto* p = sqlite3_column_text(stmt_, col);
        return p ? std::string(reinterpret_cast<const char*>(p), sqlite3_column_bytes(stmt_, col)) : std::string();
    }
    [[nodiscard]] std::optional<std::string> opt_text(int col) const {
        if (sqlite3_column_type(stmt_, col) == SQLITE_NULL) return std::nullopt;
        return text(col);
    }
    [[nodiscard]] std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

private:
    void check(int rc) const {
        if (rc != SQLITE_OK) fail(db_, "bind");
    }
    sqlite3* db_;
    sqlite3_stmt* stmt_ = nullptr;
};

void exec(sqlite3* db, const char* sql) {
    char* msg = nullptr;
    if (sqlite3_exec(db, sql, nullptr, nullptr, &msg) != SQLITE_OK) {
        std::string text = msg ? msg : "exec failed";
        sqlite3_free(msg);
        throw error(errc::storage, text);
    }
}

constexpr const char* kVisitColumns =
    "id, name, surname, patient_code, origin, exam_type, visit_date, physician_id, room, status, diagnosis, "
    "emr_doc_id, version";

VisitRecord read_visit(const Stmt& s) {
    VisitRecord v;
    v.visit_id = s.text(0);
    v.patient = {s.text(1), s.text(2), s.text(3), parse_origin(s.text(4))};
    v.exam_type = s.text(5);
    v.visit_date = s.text(6);
    v.physician_id = s.text(7);
    v.room = s.opt_text(8);
    v.status = parse_visit_status(s.text(9));
    v.diagnosis = s.opt_text(10);
    v.emr_doc_id = s.opt_text(11);
    v.version = s.integer(12);
    return v;
}

std::vector<VisitRecord> read_visits(Stmt& s) {
    std::vector<VisitRecord> out;
    while (s.step()) out.push_back(read_visit(s));
    return out;
}

std::int64_t epoch(Timestamp t) { return t.time_since_epoch().count(); }

} // namespace

/// BEGIN IMMEDIATE ... COMMIT, rolled back unless committed.
struct MasterDb::Tx {
    explicit Tx(sqlite3* db) : db(db) { exec(db, "BEGIN IMMEDIATE"); }
    ~Tx() {
        if (!done) sqlite3_exec(db, "ROLLBACK", nullptr, nullptr, nullptr);
    }
    void commit() {
        exec(db, "COMMIT");
        done = true;
    }
    sqlite3* db;
    bool done = false;
};

MasterDb::MasterDb(const std::string& path) {
    if (sqlite3_open_v2(path.c_str(), &db_, SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE | SQLITE_OPEN_FULLMUTEX,
                        nullptr) != SQLITE_OK) {
        std::string msg = db_ ? sqlite3_errmsg(db_) : "out of memory";
        sqlite3_close(db_);
        throw error(errc::storage, "cannot open master-db " + path + ": " + msg);
    }
    sqlite3_busy_timeout(db_, 5000);
    try {
        exec(db_, kSchema);
    } catch (...) {
        sqlite3_close(db_);
        throw;
    }
}

MasterDb::~MasterDb() { sqlite3_close(db_); }

void MasterDb::add_principal(const Principal& p) {
    std::lock_guard lock(mutex_);
    Stmt s(db_,
           "INSERT INTO principals (id, role, display_name, certificate) VALUES (?1, ?2, ?3, ?4) "
           "ON CONFLICT(id) DO UPDATE SET role = ?2, display_name = ?3, certificate = ?4");
    s.bind(1, p.id).bind(2, std::string(to_string(p.role))).bind(3, p.display_name).bind(4, p.certificate_xml).run();
}

std::optional<Principal> MasterDb::principal(const std::string& id) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, "SELECT id, role, display_name, certificate FROM principals WHERE id = ?1");
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return Principal{s.text(0), parse_principal_role(s.text(1)), s.text(2), s.text(3)};
}

std::string MasterDb::register_visit(const NewVisit& visit) {
    require_date(visit.visit_date);
    for (const auto* field : {&visit.patient.name, &visit.patient.surname, &visit.patient.patient_code,
                              &visit.exam_type}) {
        if (field->empty()) throw error(errc::validation_failed, "patient name, surname, code and exam type are required");
    }
    std::lock_guard lock(mutex_);
    auto doc = principal(visit.physician_id);
    if (!doc || doc->role != PrincipalRole::physician) {
        throw error(errc::unknown_physician, "'" + visit.physician_id + "' is not a registered physician");
    }
    Tx tx(db_);
    Stmt ins(db_,
             "INSERT INTO visits (name, surname, patient_code, origin, exam_type, visit_date, physician_id, room, "
             "status, version) VALUES (?1, ?2, ?3, ?4, ?5, ?6, ?7, ?8, 'reserved', 0)");
    ins.bind(1, xml::nfc(visit.patient.name))
        .bind(2, xml::nfc(visit.patient.surname))
        .bind(3, visit.patient.patient_code)
        .bind(4, std::string(to_string(visit.patient.origin)))
        .bind(5, xml::nfc(visit.exam_type))
        .bind(6, visit.visit_date)
        .bind(7, visit.physician_id)
        .bind(8, visit.room ? std::optional(xml::nfc(*visit.room)) : std::nullopt)
        .run();
    auto id = "v" + std::to_string(sqlite3_last_insert_rowid(db_));
    Stmt(db_, "UPDATE visits SET id = ?1 WHERE seq = ?2").bind(1, id).bind(2, sqlite3_last_insert_rowid(db_)).run();
    tx.commit();
    return id;
}

std::optional<VisitRecord> MasterDb::visit(const std::string& visit_id) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, (std::string("SELECT ") + kVisitColumns + " FROM visits WHERE id = ?1").c_str());
    s.bind(1, visit_id);
    if (!s.step()) return std::nullopt;
    return read_visit(s);
}

VisitRecord MasterDb::require_visit(const std::string& visit_id) const {
    auto v = visit(visit_id);
    if (!v) throw error(errc::unknown_visit, visit_id);
    return *v;
}

std::vector<VisitRecord> MasterDb::visits_on(const std::string& date, const std::string& physician_id) const {
    require_date(date);
    std::lock_guard lock(mutex_);
    Stmt s(db_, (std::string("SELECT ") + kVisitColumns +
                 " FROM visits WHERE visit_date = ?1 AND (?2 = '' OR physician_id = ?2) ORDER BY seq")
                    .c_str());
    s.bind(1, date).bind(2, physician_id);
    return read_visits(s);
}

std::vector<VisitRecord> MasterDb::all_visits() const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, (std::string("SELECT ") + kVisitColumns + " FROM visits ORDER BY seq").c_str());
    return read_visits(s);
}

std::optional<std::pair<std::string, Timestamp>> MasterDb::lease(const std::string& visit_id) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, "SELECT physician_id, expires_at FROM leases WHERE visit_id = ?1");
    s.bind(1, visit_id);
    if (!s.step()) return std::nullopt;
    return std::pair{s.text(0), Timestamp{std::chrono::seconds{s.integer(1)}}};
}

Snapshot MasterDb::checkout(const std::string& physician_id, const std::string& date, Timestamp now,
                            std::chrono::seconds ttl) {
    std::lock_guard lock(mutex_);
    auto doc = principal(physician_id);
    if (!doc || doc->role != PrincipalRole::physician) {
        throw error(errc::unknown_physician, "'" + physician_id + "' is not a registered physician");
    }
    Snapshot snap{physician_id, date, now, visits_on(date, physician_id), {}};
    Tx tx(db_);
    for (const auto& v : snap.visits) {
        if (v.status == VisitStatus::processed) continue;
        auto held = lease(v.visit_id);
        if (held && held->first != physician_id && held->second > now) {
            throw error(errc::lease_held_by_other, v.visit_id + " is leased by " + held->first);
        }
        Stmt(db_,
             "INSERT INTO leases (visit_id, physician_id, expires_at) VALUES (?1, ?2, ?3) "
             "ON CONFLICT(visit_id) DO UPDATE SET physician_id = ?2, expires_at = ?3")
            .bind(1, v.visit_id)
            .bind(2, physician_id)
            .bind(3, epoch(now + ttl))
            .run();
    }
    tx.commit();
    std::set<std::string> seen;
    for (const auto& v : snap.visits) {
        if (!seen.insert(v.patient.patient_code).second) continue;
        auto past = history(v.patient.patient_code);
        snap.history.insert(snap.history.end(), past.begin(), past.end());
    }
    return snap;
}

std::vector<PushResult> MasterDb::push(const std::string& physician_id, const std::vector<PushItem>& items,
                                       Timestamp now) {
    for (const auto& item : items) {
        if (item.diagnosis.empty()) throw error(errc::validation_failed, "empty diagnosis for " + item.visit_id);
    }
    std::lock_guard lock(mutex_);
    std::vector<PushResult> results;
    Tx tx(db_);
    for (const auto& item : items) {
        PushResult r{item.visit_id, PushOutcome::ok, 0};
        auto current = visit(item.visit_id);
        auto held = lease(item.visit_id);
        if (current) r.master_version = current->version;
        if (!current || !held || held->first != physician_id || held->second <= now ||
            current->physician_id != physician_id) {
            r.outcome = PushOutcome::not_lease_holder;
        } else if (current->version != item.base_version || current->status == VisitStatus::processed) {
            r.outcome = PushOutcome::stale_version;
        } else {
            Stmt(db_, "UPDATE visits SET diagnosis = ?1, status = 'diagnosed', version = version + 1 WHERE id = ?2")
                .bind(1, xml::nfc(item.diagnosis))
                .bind(2, item.visit_id)
                .run();
            r.master_version = current->version + 1;
        }
        results.push_back(std::move(r));
    }
    tx.commit();
    return results;
}

std::int64_t MasterDb::amend_diagnosis(const std::string& visit_id, const std::string& text) {
    if (text.empty()) throw error(errc::validation_failed, "empty diagnosis");
    std::lock_guard lock(mutex_);
    auto current = require_visit(visit_id);
    if (current.status == VisitStatus::processed) throw error(errc::already_processed, visit_id);
    Stmt(db_, "UPDATE visits SET diagnosis = ?1, status = 'diagnosed', version = version + 1 WHERE id = ?2")
        .bind(1, xml::nfc(text))
        .bind(2, visit_id)
        .run();
    return current.version + 1;
}

void MasterDb::record_pending_emr(const std::string& visit_id, const std::string& content_digest, Timestamp now) {
    std::lock_guard lock(mutex_);
    Stmt(db_, "INSERT OR IGNORE INTO pending_emr (visit_id, content_digest, created_at) VALUES (?1, ?2, ?3)")
        .bind(1, visit_id)
        .bind(2, content_digest)
        .bind(3, epoch(now))
        .run();
}

std::optional<std::string> MasterDb::pending_visit_for(const std::string& content_digest) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, "SELECT visit_id FROM pending_emr WHERE content_digest = ?1");
    s.bind(1, content_digest);
    if (!s.step()) return std::nullopt;
    return s.text(0);
}

std::optional<EmrLink> MasterDb::emr_link(const std::string& visit_id) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_, "SELECT visit_id, content_digest, doc_id FROM emr_links WHERE visit_id = ?1");
    s.bind(1, visit_id);
    if (!s.step()) return std::nullopt;
    return EmrLink{s.text(0), s.text(1), s.text(2)};
}

void MasterDb::mark_processed(const std::string& visit_id, const std::string& content_digest,
                              const std::string& doc_id) {
    std::lock_guard lock(mutex_);
    auto v = require_visit(visit_id);
    if (v.status == VisitStatus::processed) throw error(errc::already_processed, visit_id);
    if (v.status != VisitStatus::diagnosed || !v.diagnosis) throw error(errc::not_diagnosed, visit_id);
    Tx tx(db_);
    Stmt(db_, "UPDATE visits SET status = 'processed', emr_doc_id = ?1, version = version + 1 WHERE id = ?2")
        .bind(1, doc_id)
        .bind(2, visit_id)
        .run();
    Stmt(db_, "INSERT INTO emr_links (visit_id, content_digest, doc_id) VALUES (?1, ?2, ?3)")
        .bind(1, visit_id)
        .bind(2, content_digest)
        .bind(3, doc_id)
        .run();
    Stmt(db_,
         "INSERT INTO history (patient_code, visit_date, exam_type, diagnosis, emr_doc_id) VALUES (?1, ?2, ?3, ?4, ?5)")
        .bind(1, v.patient.patient_code)
        .bind(2, v.visit_date)
        .bind(3, v.exam_type)
        .bind(4, *v.diagnosis)
        .bind(5, doc_id)
        .run();
    Stmt(db_, "DELETE FROM leases WHERE visit_id = ?1").bind(1, visit_id).run();
    tx.commit();
}

void MasterDb::add_history(const HistoryEntry& entry) {
    require_date(entry.visit_date);
    std::lock_guard lock(mutex_);
    Stmt(db_,
         "INSERT INTO history (patient_code, visit_date, exam_type, diagnosis, emr_doc_id) VALUES (?1, ?2, ?3, ?4, ?5)")
        .bind(1, entry.patient_code)
        .bind(2, entry.visit_date)
        .bind(3, xml::nfc(entry.exam_type))
        .bind(4, xml::nfc(entry.diagnosis))
        .bind(5, entry.emr_doc_id)
        .run();
}

std::vector<HistoryEntry> MasterDb::history(const std::string& patient_code) const {
    std::lock_guard lock(mutex_);
    Stmt s(db_,
           "SELECT patient_code, visit_date, exam_type, diagnosis, emr_doc_id FROM history WHERE patient_code = ?1 "
           "ORDER BY visit_date, seq");
    s.bind(1, patient_code);
    std::vector<HistoryEntry> out;
    while (s.step()) out.push_back({s.text(0), s.text(1), s.text(2), s.text(3), s.opt_text(4)});
    return out;
}

std::vector<std::string> MasterDb::audit() const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> problems;
    for (const auto& v : all_visits()) {
        auto where = v.visit_id + ": ";
        if (!is_iso_date(v.visit_date)) problems.push_back(where + "bad visit date");
        auto doc = principal(v.physician_id);
        if (!doc || doc->role != PrincipalRole::physician) problems.push_back(where + "assignee is not a physician");
        switch (v.status) {
        case VisitStatus::reserved:
            if (v.diagnosis || v.emr_doc_id) problems.push_back(where + "reserved visit carries results");
            break;
        case VisitStatus::diagnosed:
            if (!v.diagnosis || v.diagnosis->empty()) problems.push_back(where + "diagnosed without diagnosis");
            if (v.emr_doc_id) problems.push_back(where + "diagnosed visit has an e-MR");
            break;
        case VisitStatus::processed: {
            if (!v.diagnosis || v.diagnosis->empty()) problems.push_back(where + "processed without diagnosis");
            auto link = emr_link(v.visit_id);
            if (!v.emr_doc_id) problems.push_back(where + "processed without e-MR");
            else if (!link || link->doc_id != *v.emr_doc_id) problems.push_back(where + "e-MR link disagrees");
            if (lease(v.visit_id)) problems.push_back(where + "processed visit still leased");
            break;
        }
        }
        if (auto held = lease(v.visit_id); held && held->first != v.physician_id) {
            problems.push_back(where + "leased by " + held->first + " instead of the assignee");
        }
    }
    Stmt orphans(db_,
                 "SELECT l.visit_id FROM emr_links l LEFT JOIN visits v ON v.id = l.visit_id "
                 "WHERE v.id IS NULL OR v.status != 'processed'");
    while (orphans.step()) problems.push_back(orphans.text(0) + ": e-MR link on an unprocessed visit");
    return problems;
}

} // namespace sda::medreg
