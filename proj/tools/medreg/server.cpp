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

#include "sda/medreg/facade.hpp"

#include <csignal>
#include <iostream>

namespace sda::medreg_cli {

namespace {

struct ServeArgs {
    std::string db;
    std::string listen = "127.0.0.1:0";
    cli::Connection platform;
    std::string emr_type = "medical-report";
    std::string sign_stylesheet;
    std::string print_stylesheet;
    std::string locale;
    std::string static_dir;
};

std::optional<std::string> non_empty(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

int serve(const ServeArgs& a) {
    sigset_t stop;
    sigemptyset(&stop);
    sigaddset(&stop, SIGINT);
    sigaddset(&stop, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &stop, nullptr);

    medreg::MasterDb db(a.db);
    medreg::ServiceOptions opts;
    opts.emr_type = a.emr_type;
    opts.sign_stylesheet = non_empty(a.sign_stylesheet);
    opts.print_stylesheet = non_empty(a.print_stylesheet);
    opts.locale = non_empty(a.locale);
    medreg::MedregService service(db, std::make_unique<client::Client>(cli::open_client(a.platform)), opts);
    medreg::FacadeOptions fopts;
    if (!a.static_dir.empty()) fopts.static_dir = a.static_dir;
    medreg::Facade facade(service, fopts);
    auto [host, port] = cli::split_host_port(a.listen);
    auto bound = facade.start(host, port);
    std::cout << "listening facade http://" << host << ':' << bound << std::endl;
    int sig = 0;
    sigwait(&stop, &sig);
    facade.stop();
    return cli::kExitOk;
}

} // namespace

void add_server_commands(CLI::App& app) {
    static ServeArgs serve_args;
    auto* serve_cmd = app.add_subcommand("serve", "Run the facade over a master-db (SA keystore, SDA_PIN)");
    serve_cmd->add_option("--db", serve_args.db, "Master-db file")->required();
    serve_cmd->add_option("--listen", serve_args.listen, "host:port for the facade (port 0 picks one)");
    cli::add_connection_options(*serve_cmd, serve_args.platform);
    serve_cmd->add_option("--emr-type", serve_args.emr_type, "Document type of e-MRs");
    serve_cmd->add_option("--sign-stylesheet", serve_args.sign_stylesheet, "Stylesheet shown for signing");
    serve_cmd->add_option("--print-stylesheet", serve_args.print_stylesheet, "Stylesheet used for printing");
    serve_cmd->add_option("--locale", serve_args.locale, "Locale when no signing stylesheet is named");
    serve_cmd->add_option("--static-dir", serve_args.static_dir, "Directory served under /")
        ->check(CLI::ExistingDirectory);
    on_run(serve_cmd, [] { return serve(serve_args); });

    static std::string db_path;
    static medreg::Principal principal;
    static std::string principal_role;
    static std::string principal_cert;
    auto* principal_cmd = app.add_subcommand("principal", "Facade principals");
    principal_cmd->require_subcommand(1);
    auto* add = principal_cmd->add_subcommand("add", "Add or replace a principal");
    add->add_option("--db", db_path, "Master-db file")->required();
    add->add_option("--id", principal.id, "Principal id")->required();
    add->add_option("--role", principal_role, "physician, registrar or admin")
        ->required()
        ->check(CLI::IsMember({"physician", "registrar", "admin"}));
    add->add_option("--cert", principal_cert, "Certificate of the principal's keystore")
        ->required()
        ->check(CLI::ExistingFile);
    add->add_option("--name", principal.display_name, "Display name (default: certificate subject)");
    on_run(add, [] {
        auto cert = crypto::load_certificate(principal_cert);
        principal.role = medreg::parse_principal_role(principal_role);
        principal.certificate_xml = xml::canonicalize(crypto::to_xml(cert));
        if (principal.display_name.empty()) principal.display_name = cert.subject_name;
        medreg::MasterDb(db_path).add_principal(principal);
        std::cout << "principal " << principal.id << ' ' << principal_role << '\n';
        return cli::kExitOk;
    });

    static std::string visit_id;
    static std::string diagnosis;
    auto* amend = app.add_subcommand("amend", "Back-office correction of a visit's diagnosis");
    amend->add_option("--db", db_path, "Master-db file")->required();
    amend->add_option("--visit", visit_id)->required();
    amend->add_option("--diagnosis", diagnosis)->required();
    on_run(amend, [] {
        auto version = medreg::MasterDb(db_path).amend_diagnosis(visit_id, diagnosis);
        std::cout << visit_id << " version " << version << '\n';
        return cli::kExitOk;
    });

    auto* audit = app.add_subcommand("audit", "Check master-db invariants; exit 1 when any fails");
    audit->add_option("--db", db_path, "Master-db file")->required();
    on_run(audit, [] {
        auto problems = medreg::MasterDb(db_path).audit();
        for (const auto& p : problems) std::cout << p << '\n';
        if (problems.empty()) std::cout << "ok\n";
        return problems.empty() ? cli::kExitOk : cli::kExitRefused;
    });

    static medreg::HistoryEntry entry;
    auto* import = app.add_subcommand("history-import", "Add one earlier exam to a patient's history");
    import->add_option("--db", db_path, "Master-db file")->required();
    import->add_option("--code", entry.patient_code)->required();
    import->add_option("--date", entry.visit_date)->required();
    import->add_option("--exam", entry.exam_type)->required();
    import->add_option("--diagnosis", entry.diagnosis)->required();
    on_run(import, [] {
        medreg::require_date(entry.visit_date);
        medreg::MasterDb(db_path).add_history(entry);
        return cli::kExitOk;
    });
}

} // namespace sda::medreg_cli
