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

#include "commands.hpp"

#include "sda/common/files.hpp"
#include "sda/medreg/facade.hpp"
#include "sda/medreg/light_db.hpp"

#include <cstdlib>
#include <iostream>

namespace sda::medreg_cli {

namespace {

struct DeskOptions {
    std::string facade;
    std::string keystore;
    std::string principal;
    std::string lightdb;
    bool offline = false;
};

DeskOptions desk;

std::filesystem::path lightdb_path() {
    if (!desk.lightdb.empty()) return desk.lightdb;
    if (const char* dir = std::getenv("SDA_CLIENT_DIR")) return std::filesystem::path(dir) / "light-db.xml";
    return "light-db.xml";
}

medreg::LightDb load_local() {
    auto db = medreg::load_light_db(lightdb_path());
    if (!db) throw error(errc::not_found, "no light-db at " + lightdb_path().string() + "; run checkout first");
    return std::move(*db);
}

/// A logged-in facade client plus the PIN that opened the keystore.
struct Session {
    medreg::FacadeClient facade;
    std::string pin;
};

Session connect() {
    // Offline runs fail before the keystore is touched.
    if (desk.offline) throw error(errc::offline, "transport disabled");
    if (desk.facade.empty() || desk.keystore.empty() || desk.principal.empty()) {
        throw error(errc::malformed, "--facade, --keystore and --principal are required");
    }
    auto pin = cli::read_pin("PIN: ");
    auto ks = crypto::SoftKeystore::load(desk.keystore);
    Session s{medreg::FacadeClient(desk.facade), pin};
    s.facade.login(desk.principal, ks.open(pin));
    return s;
}

void print_visit(const medreg::VisitRecord& v, std::string_view flags = {}) {
    std::cout << v.visit_id << ' ' << v.visit_date << ' ' << to_string(v.status) << " v" << v.version << ' '
              << v.patient.patient_code << ' ' << v.patient.surname << ' ' << v.patient.name << " | " << v.exam_type;
    if (v.room) std::cout << " | room " << *v.room;
    if (v.diagnosis) std::cout << " | " << *v.diagnosis;
    if (!flags.empty()) std::cout << " [" << flags << ']';
    std::cout << '\n';
}

void print_history(const std::vector<medreg::HistoryEntry>& entries) {
    for (const auto& h : entries) {
        std::cout << "history " << h.patient_code << ' ' << h.visit_date << ' ' << h.exam_type << " | " << h.diagnosis;
        if (h.emr_doc_id) std::cout << " | " << *h.emr_doc_id;
        std::cout << '\n';
    }
}

struct RegisterArgs {
    medreg::NewVisit visit;
    std::string origin = "internal";
    std::string room;
};
RegisterArgs reg;

int register_visit() {
    reg.visit.patient.origin = medreg::parse_origin(reg.origin);
    if (!reg.room.empty()) reg.visit.room = reg.room;
    auto s = connect();
    std::cout << s.facade.register_visit(reg.visit) << '\n';
    return cli::kExitOk;
}

std::string checkout_date;

int checkout() {
    auto s = connect();
    auto date = checkout_date.empty() ? format_date(system_now()) : checkout_date;
    auto snap = s.facade.worklist(date);
    auto db = medreg::apply_snapshot(medreg::load_light_db(lightdb_path()), snap);
    save_light_db(lightdb_path(), db);
    for (const auto& v : db.visits) print_visit(v.record, v.dirty ? "unsynced" : "");
    print_history(db.history);
    return cli::kExitOk;
}

int worklist() {
    auto db = load_local();
    std::cout << "physician " << db.physician_id << " day " << db.visit_date << " snapshot "
              << format_timestamp(db.snapshot_time) << '\n';
    for (const auto& v : db.visits) {
        std::string flags = v.dirty ? "unsynced" : "";
        if (v.stale) flags += flags.empty() ? "stale" : ",stale";
        print_visit(v.record, flags);
    }
    for (const auto& p : db.pending) {
        std::cout << "signed " << p.visit_id << ' ' << (p.doc_id ? "uploaded " + *p.doc_id : "waiting") << '\n';
    }
    return cli::kExitOk;
}

std::string diag_visit;
std::string diag_text;

int diagnose() {
    auto db = load_local();
    medreg::record_diagnosis(db, diag_visit, diag_text);
    save_light_db(lightdb_path(), db);
    std::cout << diag_visit << " recorded locally\n";
    return cli::kExitOk;
}

int sync() {
    auto db = load_local();
    auto items = medreg::push_items(db);
    if (items.empty()) {
        std::cout << "nothing to sync\n";
        return cli::kExitOk;
    }
    auto s = connect();
    auto reply = s.facade.sync(items);
    medreg::apply_push_results(db, items, reply.results);
    save_light_db(lightdb_path(), db);
    bool refused = false;
    for (const auto& r : reply.results) {
        std::cout << r.visit_id << ' ' << to_string(r.outcome) << " v" << r.master_version << '\n';
        refused = refused || r.outcome != medreg::PushOutcome::ok;
    }
    return refused ? cli::kExitRefused : cli::kExitOk;
}

std::string emr_visit;
bool emr_yes = false;

int emr_generate() {
    auto db = load_local();
    auto s = connect();
    auto g = s.facade.generate_emr(emr_visit);
    if (!cli::review(g.view, emr_yes)) throw error(errc::user_abort, "confirmation code did not match");
    auto ks = crypto::SoftKeystore::load(desk.keystore);
    auto signed_doc = client::wysiwys_sign(g.doc, g.view, ks, s.pin, [](const auto&) { return true; });
    medreg::add_pending(db, g.visit_id, std::move(signed_doc));
    save_light_db(lightdb_path(), db);
    std::cout << g.visit_id << " signed, waiting for upload\n";
    return cli::kExitOk;
}

int emr_store() {
    auto db = load_local();
    std::vector<std::pair<std::string, edoc::EDoc>> waiting;
    for (const auto& p : db.pending) {
        if (!p.doc_id) waiting.emplace_back(p.visit_id, p.doc);
    }
    if (waiting.empty()) {
        std::cout << "nothing to upload\n";
        return cli::kExitOk;
    }
    auto s = connect();
    for (const auto& [visit_id, doc] : waiting) {
        auto stored = s.facade.store_emr(doc);
        medreg::acknowledge_upload(db, visit_id, stored.doc_id);
        save_light_db(lightdb_path(), db);
        std::cout << visit_id << " stored " << stored.doc_id << (stored.already_stored ? " (already)" : "") << '\n';
    }
    return cli::kExitOk;
}

std::string print_doc;
std::string print_out;

int print() {
    auto s = connect();
    auto p = s.facade.print_emr(print_doc);
    if (print_out.empty()) {
        std::cout << p.view.text << (p.view.text.ends_with('\n') ? "" : "\n");
    } else {
        write_file_atomic(print_out, p.view.text);
    }
    std::cerr << "view digest " << p.view.view_digest.hex() << '\n';
    return cli::kExitOk;
}

std::string purge_id;

int purge() {
    auto db = load_local();
    medreg::purge_signed(db, purge_id);
    save_light_db(lightdb_path(), db);
    std::cout << purge_id << " purged\n";
    return cli::kExitOk;
}

std::string history_code;

int history() {
    auto s = connect();
    print_history(s.facade.history(history_code));
    return cli::kExitOk;
}

} // namespace

void add_desk_commands(CLI::App& app) {
    auto common = [](CLI::App* cmd) {
        cmd->add_option("--facade", desk.facade, "Facade URL, e.g. http://127.0.0.1:8090");
        cmd->add_option("--keystore", desk.keystore, "Principal's keystore (SDA_PIN)");
        cmd->add_option("--principal", desk.principal, "Principal id");
        cmd->add_flag("--offline", desk.offline, "Disable the transport; network commands fail with OFFLINE");
        cmd->add_option("--lightdb", desk.lightdb, "Light-db file (default $SDA_CLIENT_DIR/light-db.xml)");
    };

    auto* r = app.add_subcommand("register", "Register a visit (registrar)");
    common(r);
    r->add_option("--name", reg.visit.patient.name)->required();
    r->add_option("--surname", reg.visit.patient.surname)->required();
    r->add_option("--code", reg.visit.patient.patient_code, "Patient code")->required();
    r->add_option("--origin", reg.origin)->check(CLI::IsMember({"internal", "external"}));
    r->add_option("--exam", reg.visit.exam_type, "Exam type")->required();
    r->add_option("--date", reg.visit.visit_date, "YYYY-MM-DD")->required();
    r->add_option("--physician", reg.visit.physician_id)->required();
    r->add_option("--room", reg.room);
    on_run(r, register_visit);

    auto* c = app.add_subcommand("checkout", "Lease the day's visits into the light-db");
    common(c);
    c->add_option("--date", checkout_date, "YYYY-MM-DD (default today)");
    on_run(c, checkout);

    auto* w = app.add_subcommand("worklist", "Show the light-db (no network)");
    common(w);
    on_run(w, worklist);

    auto* d = app.add_subcommand("diagnose", "Record a diagnosis in the light-db (no network)");
    common(d);
    d->add_option("--visit", diag_visit)->required();
    d->add_option("--text", diag_text)->required();
    on_run(d, diagnose);

    auto* s = app.add_subcommand("sync", "Push local diagnoses; exit 1 when any is refused");
    common(s);
    on_run(s, sync);

    auto* emr = app.add_subcommand("emr", "Electronic medical reports");
    emr->require_subcommand(1);
    auto* gen = emr->add_subcommand("generate", "Fetch the e-MR, review it, sign it into the light-db");
    common(gen);
    gen->add_option("--visit", emr_visit)->required();
    gen->add_flag("--yes", emr_yes, "Sign without typing the confirmation code");
    on_run(gen, emr_generate);
    auto* store = emr->add_subcommand("store", "Upload every signed e-MR still waiting");
    common(store);
    on_run(store, emr_store);

    auto* p = app.add_subcommand("print", "Render a stored e-MR for printing");
    common(p);
    p->add_option("--doc", print_doc, "Doc id")->required();
    p->add_option("--out", print_out, "Write the text here instead of stdout");
    on_run(p, print);

    auto* pg = app.add_subcommand("purge", "Drop an uploaded e-MR from the light-db");
    common(pg);
    pg->add_option("--id", purge_id, "Doc id or visit id")->required();
    on_run(pg, purge);

    auto* h = app.add_subcommand("history", "Patient history");
    common(h);
    h->add_option("--code", history_code, "Patient code")->required();
    on_run(h, history);
}

} // namespace sda::medreg_cli
