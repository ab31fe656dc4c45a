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

#include "sda/medreg/light_db.hpp"

#include "sda/common/files.hpp"

#include <algorithm>
#include <map>

namespace sda::medreg {

LocalVisit* LightDb::find(const std::string& visit_id) {
    auto it = std::find_if(visits.begin(), visits.end(), [&](const auto& v) { return v.record.visit_id == visit_id; });
    return it == visits.end() ? nullptr : &*it;
}

const LocalVisit* LightDb::find(const std::string& visit_id) const {
    return const_cast<LightDb*>(this)->find(visit_id);
}

xml::Element to_xml(const LightDb& db) {
    xml::Element e{"light-db"};
    e.set("physician", db.physician_id);
    e.set("date", db.visit_date);
    e.set("snapshot-time", format_timestamp(db.snapshot_time));
    auto& visits = e.add(xml::Element{"visits"});
    for (const auto& v : db.visits) {
        auto& lv = visits.add(xml::Element{"local"});
        lv.set("revision", std::to_string(v.local_revision));
        lv.set("dirty", v.dirty ? "true" : "false");
        lv.set("stale", v.stale ? "true" : "false");
        lv.add(to_xml(v.record));
    }
    auto& history = e.add(xml::Element{"history"});
    for (const auto& h : db.history) history.add(to_xml(h));
    auto& pending = e.add(xml::Element{"pending"});
    for (const auto& p : db.pending) {
        auto& pe = pending.add(xml::Element{"signed"});
        pe.set("visit-id", p.visit_id);
        if (p.doc_id) pe.set("doc-id", *p.doc_id);
        pe.add(edoc::to_xml(p.doc));
    }
    return e;
}

namespace {

bool flag(const xml::Element& e, std::string_view key) {
    const auto& v = e.required_attr(key);
    if (v != "true" && v != "false") throw error(errc::malformed, std::string(key) + " must be true or false");
    return v == "true";
}

} // namespace

LightDb light_db_from_xml(const xml::Element& e) {
    if (e.name() != "light-db") throw error(errc::malformed, "expected <light-db>");
    LightDb db;
    db.physician_id = e.required_attr("physician");
    db.visit_date = e.required_attr("date");
    db.snapshot_time = parse_timestamp(e.required_attr("snapshot-time"));
    for (const auto* lv : e.required_child("visits").children_named("local")) {
        if (lv->children().size() != 1) throw error(errc::malformed, "<local> holds exactly one <visit>");
        LocalVisit v;
        v.local_revision = std::stoll(lv->required_attr("revision"));
        v.dirty = flag(*lv, "dirty");
        v.stale = flag(*lv, "stale");
        v.record = visit_from_xml(lv->children().front());
        db.visits.push_back(std::move(v));
    }
    for (const auto* h : e.required_child("history").children_named("exam")) {
        db.history.push_back(history_from_xml(*h));
    }
    for (const auto* p : e.required_child("pending").children_named("signed")) {
        db.pending.push_back({p->required_attr("visit-id"), edoc::doc_from_xml(p->required_child("edoc")),
                              p->attr("doc-id")});
    }
    return db;
}

std::optional<LightDb> load_light_db(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) return std::nullopt;
    try {
        return light_db_from_xml(xml::parse(read_file(path)));
    } catch (const error& e) {
        if (e.code() == errc::storage) throw;
        throw error(errc::malformed, "light-db " + path.string() + ": " + e.what());
    } catch (const std::exception& e) {
        throw error(errc::malformed, "light-db " + path.string() + ": " + e.what());
    }
}

void save_light_db(const std::filesystem::path& path, const LightDb& db) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    write_file_atomic(path, xml::canonicalize(to_xml(db)));
}

LightDb apply_snapshot(std::optional<LightDb> current, const Snapshot& snap) {
    LightDb next;
    next.physician_id = snap.physician_id;
    next.visit_date = snap.visit_date;
    next.snapshot_time = snap.taken_at;
    next.history = snap.history;
    std::map<std::string, const LocalVisit*> local;
    if (current) {
        if (current->physician_id != snap.physician_id) {
            for (const auto& v : current->visits) {
                if (v.dirty) throw error(errc::validation_failed, "replica holds unsynced edits of another physician");
            }
        }
        for (const auto& v : current->visits) local.emplace(v.record.visit_id, &v);
        // Signed e-MRs awaiting upload or purge survive any re-checkout.
        next.pending = std::move(current->pending);
    }
    for (const auto& rec : snap.visits) {
        LocalVisit v{rec, 0, false, false};
        if (auto it = local.find(rec.visit_id); it != local.end()) {
            const auto& old = *it->second;
            v.local_revision = old.local_revision;
            if (old.dirty && old.record.version == rec.version && rec.status != VisitStatus::processed) {
                v.record.diagnosis = old.record.diagnosis;
                v.record.status = VisitStatus::diagnosed;
                v.dirty = true;
            }
            local.erase(it);
        }
        next.visits.push_back(std::move(v));
    }
    for (const auto& [id, old] : local) {
        if (old->dirty) throw error(errc::validation_failed, "checkout would drop the unsynced edit of " + id);
    }
    return next;
}

void record_diagnosis(LightDb& db, const std::string& visit_id, const std::string& text) {
    auto* v = db.find(visit_id);
    if (!v) throw error(errc::unknown_visit, visit_id + " is not in the local worklist");
    if (text.empty()) throw error(errc::validation_failed, "diagnosis text is empty");
    if (v->record.status == VisitStatus::processed) throw error(errc::already_processed, visit_id);
    v->record.diagnosis = xml::nfc(text);
    v->record.status = VisitStatus::diagnosed;
    v->dirty = true;
    ++v->local_revision;
}

std::vector<PushItem> push_items(const LightDb& db) {
    std::vector<PushItem> items;
    for (const auto& v : db.visits) {
        if (v.dirty && v.record.diagnosis) items.push_back({v.record.visit_id, v.record.version, *v.record.diagnosis});
    }
    return items;
}

void apply_push_results(LightDb& db, const std::vector<PushItem>& pushed, const std::vector<PushResult>& results) {
    for (const auto& r : results) {
        auto* v = db.find(r.visit_id);
        if (!v) continue;
        auto sent = std::find_if(pushed.begin(), pushed.end(), [&](const auto& p) { return p.visit_id == r.visit_id; });
        if (r.outcome == PushOutcome::ok) {
            v->record.version = r.master_version;
            // A newer local edit made during the push stays dirty.
            v->dirty = sent == pushed.end() || v->record.diagnosis != sent->diagnosis;
            v->stale = false;
        } else {
            v->stale = true;
        }
    }
}

void add_pending(LightDb& db, const std::string& visit_id, edoc::EDoc signed_doc) {
    if (!db.find(visit_id)) throw error(errc::unknown_visit, visit_id + " is not in the local worklist");
    auto it = std::find_if(db.pending.begin(), db.pending.end(), [&](const auto& p) { return p.visit_id == visit_id; });
    if (it != db.pending.end()) {
        if (it->doc_id) throw error(errc::already_processed, visit_id + " was already uploaded as " + *it->doc_id);
        it->doc = std::move(signed_doc);
        return;
    }
    db.pending.push_back({visit_id, std::move(signed_doc), std::nullopt});
}

void acknowledge_upload(LightDb& db, const std::string& visit_id, const std::string& doc_id) {
    for (auto& p : db.pending) {
        if (p.visit_id == visit_id) p.doc_id = doc_id;
    }
    if (auto* v = db.find(visit_id)) {
        v->record.status = VisitStatus::processed;
        v->record.emr_doc_id = doc_id;
        v->dirty = false;
    }
}

void purge_signed(LightDb& db, const std::string& id) {
    auto it = std::find_if(db.pending.begin(), db.pending.end(),
                           [&](const auto& p) { return p.doc_id == id || p.visit_id == id; });
    if (it == db.pending.end()) throw error(errc::not_uploaded, "no signed e-MR '" + id + "' in the replica");
    if (!it->doc_id) throw error(errc::not_uploaded, it->visit_id + " has not been acknowledged by the server");
    db.pending.erase(it);
}

} // namespace sda::medreg
