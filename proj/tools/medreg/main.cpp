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

// medreg: visit registration, offline worklists and e-MR handling without a browser.

#include "commands.hpp"

#include "sda/medreg/facade.hpp"

using namespace sda;

int main(int argc, char** argv) {
    CLI::App app{"Medical registration scenario"};
    app.require_subcommand(1);
    medreg_cli::add_server_commands(app);
    medreg_cli::add_desk_commands(app);
    if (auto rc = cli::parse(app, argc, argv)) return *rc;
    return cli::guarded([&] {
        try {
            return medreg_cli::run_parsed(app);
        } catch (const medreg::FacadeError& e) {
            cli::report_refusal(e.verbatim(), e.detail());
            return cli::kExitRefused;
        }
    });
}
