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

// sdakey: key pairs, role certificates and PIN-protected keystore files.

#include "../support/cli.hpp"

#include "sda/crypto/keystore.hpp"

#include <iostream>

using namespace sda;

namespace {

struct KeygenArgs {
    std::string out;
    std::string subject;
    std::string role;
    std::string issuer_keystore;
    std::string cert_out;
    int days = 730;
    std::string kdf = "interactive";
};

int keygen(const KeygenArgs& a) {
    if (std::filesystem::exists(a.out)) throw error(errc::storage, a.out + " already exists");
    auto keys = crypto::KeyPair::generate();
    auto now = system_now();
    crypto::Validity validity{now - std::chrono::minutes(5), now + std::chrono::days(a.days)};
    crypto::RoleCertificate cert;
    if (a.issuer_keystore.empty()) {
        cert = crypto::issue_certificate(keys, nullptr, keys.public_key(), a.subject, a.role, validity);
    } else {
        auto issuer_ks = crypto::SoftKeystore::load(a.issuer_keystore);
        auto issuer = issuer_ks.open(cli::read_pin("Issuer PIN: ", "SDA_ISSUER_PIN"));
        cert = crypto::issue_certificate(issuer, &issuer.certificate(), keys.public_key(), a.subject, a.role,
                                         validity);
    }
    auto limits = a.kdf == "minimal" ? crypto::KdfLimits::minimal() : crypto::KdfLimits::interactive();
    auto pin = cli::read_pin("New PIN: ");
    if (pin.empty()) throw error(errc::malformed, "empty PIN");
    auto ks = crypto::SoftKeystore::provision(a.out, keys, cert, pin, limits);
    if (!a.cert_out.empty()) crypto::save_certificate(a.cert_out, cert);
    std::cout << ks.fingerprint().hex() << '\n';
    return cli::kExitOk;
}

void show_certificate(const crypto::RoleCertificate& cert) {
    std::cout << "subject      " << cert.subject_name << '\n'
              << "role         " << cert.role_name << '\n'
              << "serial       " << cert.serial << '\n'
              << "issuer       " << (cert.self_signed() ? "self" : cert.issuer_fingerprint->hex()) << '\n'
              << "not-before   " << format_timestamp(cert.not_before) << '\n'
              << "not-after    " << format_timestamp(cert.not_after) << '\n'
              << "fingerprint  " << crypto::fingerprint(cert).hex() << '\n';
}

crypto::RoleCertificate certificate_of(const std::string& keystore, const std::string& cert_file) {
    if (!cert_file.empty()) return crypto::load_certificate(cert_file);
    return crypto::SoftKeystore::load(keystore).certificate();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Keystores and role certificates"};
    app.require_subcommand(1);

    KeygenArgs kg;
    auto* keygen_cmd = app.add_subcommand("keygen", "Generate a key pair, certify it, seal it under a PIN");
    keygen_cmd->add_option("--out", kg.out, "Keystore file to create")->required();
    keygen_cmd->add_option("--subject", kg.subject, "Subject name")->required();
    keygen_cmd->add_option("--role", kg.role, "Role name")->required();
    keygen_cmd->add_option("--issuer-keystore", kg.issuer_keystore, "Issue under this keystore (SDA_ISSUER_PIN)")
        ->check(CLI::ExistingFile);
    keygen_cmd->add_option("--days", kg.days, "Validity in days")->check(CLI::PositiveNumber);
    keygen_cmd->add_option("--kdf", kg.kdf, "PIN key derivation cost")
        ->check(CLI::IsMember({"minimal", "interactive"}));
    keygen_cmd->add_option("--cert-out", kg.cert_out, "Also write the certificate here");

    std::string keystore;
    std::string cert_file;
    std::string out;
    auto* cert_cmd = app.add_subcommand("cert", "Export the certificate held in a keystore");
    cert_cmd->add_option("--keystore", keystore)->required()->check(CLI::ExistingFile);
    cert_cmd->add_option("--out", out, "Output file; stdout when omitted");

    auto* fp_cmd = app.add_subcommand("fingerprint", "Print a certificate fingerprint");
    auto* fp_ks = fp_cmd->add_option("--keystore", keystore)->check(CLI::ExistingFile);
    fp_cmd->add_option("--cert", cert_file)->check(CLI::ExistingFile)->excludes(fp_ks);

    auto* show_cmd = app.add_subcommand("show", "Describe a keystore or certificate");
    auto* show_ks = show_cmd->add_option("--keystore", keystore)->check(CLI::ExistingFile);
    show_cmd->add_option("--cert", cert_file)->check(CLI::ExistingFile)->excludes(show_ks);

    if (auto rc = cli::parse(app, argc, argv)) return *rc;

    return cli::guarded([&] {
        if (keygen_cmd->parsed()) return keygen(kg);
        if (cert_cmd->parsed()) {
            auto cert = crypto::SoftKeystore::load(keystore).certificate();
            if (out.empty()) {
                std::cout << xml::canonicalize(crypto::to_xml(cert)) << '\n';
            } else {
                crypto::save_certificate(out, cert);
            }
            return cli::kExitOk;
        }
        if (keystore.empty() && cert_file.empty()) throw error(errc::malformed, "--keystore or --cert is required");
        if (fp_cmd->parsed()) {
            std::cout << crypto::fingerprint(certificate_of(keystore, cert_file)).hex() << '\n';
            return cli::kExitOk;
        }
        show_certificate(certificate_of(keystore, cert_file));
        if (!keystore.empty()) {
            auto ks = crypto::SoftKeystore::load(keystore);
            std::cout << "failures     " << ks.failure_counter() << '\n'
                      << "locked       " << (ks.locked() ? "yes" : "no") << '\n';
        }
        return cli::kExitOk;
    });
}
