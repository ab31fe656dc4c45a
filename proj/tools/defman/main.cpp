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

// defman: install document type definitions and their stylesheets.

#include "../support/cli.hpp"

#include "sda/client/defman.hpp"

#include <iostream>

using namespace sda;

int main(int argc, char** argv) {
    CLI::App app{"Document definitions"};
    app.require_subcommand(1);
    cli::Connection conn;
    add_connection_options(app, conn);

    std::string definition;
    std::vector<std::string> stylesheets;
    auto* install = app.add_subcommand("install", "Check locally, then install a definition and its stylesheets");
    install->add_option("--definition", definition, "Definition file")->required()->check(CLI::ExistingFile);
    install->add_option("--stylesheet", stylesheets, "Stylesheet file (repeatable)")->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list", "List installed types and stylesheets");

    if (auto rc = cli::parse(app, argc, argv)) return *rc;

    return cli::guarded([&] {
        if (install->parsed()) {
            auto def = client::load_definition(definition);
            std::vector<edoc::Stylesheet> sheets;
            for (const auto& path : stylesheets) sheets.push_back(client::load_stylesheet(path));
            auto client = cli::open_client(conn);
            client::defman_install(client, def, sheets);
            std::cout << "installed " << def.type_name << " v" << def.version;
            for (const auto& s : sheets) std::cout << ' ' << s.stylesheet_id;
            std::cout << '\n';
            return cli::kExitOk;
        }
        (void)list;
        auto client = cli::open_client(conn);
        auto catalog = client.list_types();
        for (const auto& d : catalog.definitions) {
            std::cout << "type " << d.type_name << " v" << d.version << " fields=" << d.fields.size() << '\n';
        }
        for (const auto& s : catalog.stylesheets) {
            std::cout << "stylesheet " << s.stylesheet_id << ' ' << s.type_name << ' ' << s.locale << '\n';
        }
        return cli::kExitOk;
    });
}
