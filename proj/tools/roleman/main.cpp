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

// roleman: install and revoke role certificates on the administration port.

#include "../support/cli.hpp"

#include <iostream>
#include <sstream>

using namespace sda;

namespace {

std::vector<std::string> split_list(const std::vector<std::string>& items) {
    std::vector<std::string> out;
    for (const auto& item : items) {
        std::stringstream in(item);
        for (std::string part; std::getline(in, part, ',');) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Role map administration (role-set keystore, administration port)"};
    app.require_subcommand(1);
    cli::Connection conn;
    add_connection_options(app, conn);

    std::string cert_file;
    std::vector<std::string> kinds;
    std::vector<std::string> types;
    auto* install = app.add_subcommand("install", "Grant command kinds (and optionally doc types) to a certificate");
    install->add_option("--cert", cert_file, "Role certificate file")->required()->check(CLI::ExistingFile);
    install->add_option("--kinds", kinds, "Command kinds, comma separated or repeated")->required();
    install->add_option("--types", types, "Allowed document types; every type when omitted");

    std::string fingerprint;
    auto* revoke = app.add_subcommand("revoke", "Remove a role by fingerprint");
    auto* fp_opt = revoke->add_option("--fingerprint", fingerprint, "Certificate fingerprint (hex)");
    revoke->add_option("--cert", cert_file, "Role certificate file")->check(CLI::ExistingFile)->excludes(fp_opt);

    if (auto rc = cli::parse(app, argc, argv)) return *rc;

    return cli::guarded([&] {
        if (install->parsed()) {
            proto::RoleGrant grant;
            grant.certificate = crypto::load_certificate(cert_file);
            for (const auto& k : split_list(kinds)) grant.kinds.insert(proto::parse_command_kind(k));
            if (!types.empty()) {
                auto list = split_list(types);
                grant.doc_types = std::set<std::string>(list.begin(), list.end());
            }
            auto client = cli::open_client(conn);
            client.install_role(grant);
            std::cout << "installed " << crypto::fingerprint(grant.certificate).hex() << '\n';
            return cli::kExitOk;
        }
        crypto::Fingerprint fp;
        if (!fingerprint.empty()) {
            fp = crypto::Fingerprint::from_hex(fingerprint);
        } else if (!cert_file.empty()) {
            fp = crypto::fingerprint(crypto::load_certificate(cert_file));
        } else {
            throw error(errc::malformed, "--fingerprint or --cert is required");
        }
        auto client = cli::open_client(conn);
        client.revoke_role(fp);
        std::cout << "revoked " << fp.hex() << '\n';
        return cli::kExitOk;
    });
}
