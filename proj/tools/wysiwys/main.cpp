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

// wysiwys: show a document exactly as the platform renders it, sign what was shown, verify.
//
// Rendering and verification run under a viewer credential
// (--viewer-keystore or SDA_VIEWER_KEYSTORE, PIN from SDA_VIEWER_PIN).
// The signer's keystore is opened only after the text has been confirmed.

#include "../support/cli.hpp"

#include "sda/common/files.hpp"

#include <cstdlib>
#include <iostream>

using namespace sda;

namespace {

struct Target {
    std::string doc_id;
    std::string file;
    std::string stylesheet;
    std::string locale;

    [[nodiscard]] proto::DocRef ref() const {
        if (!doc_id.empty()) return {doc_id, std::nullopt};
        if (file.empty()) throw error(errc::malformed, "--doc or --file is required");
        return {std::nullopt, edoc::parse_doc(read_file(file))};
    }
    [[nodiscard]] std::optional<std::string> sheet() const {
        return stylesheet.empty() ? std::nullopt : std::optional<std::string>(stylesheet);
    }
    [[nodiscard]] std::optional<std::string> loc() const {
        return locale.empty() ? std::nullopt : std::optional<std::string>(locale);
    }
};

void add_target_options(CLI::App& cmd, Target& t) {
    auto* doc = cmd.add_option("--doc", t.doc_id, "Stored doc id");
    cmd.add_option("--file", t.file, "Doc file")->check(CLI::ExistingFile)->excludes(doc);
    auto* sheet = cmd.add_option("--stylesheet", t.stylesheet, "Stylesheet id");
    cmd.add_option("--locale", t.locale, "Use the type's stylesheet for this locale")->excludes(sheet);
}

client::Client viewer_client(const cli::Connection& conn, std::string keystore) {
    if (keystore.empty()) {
        if (const char* env = std::getenv("SDA_VIEWER_KEYSTORE")) keystore = env;
    }
    if (keystore.empty()) throw error(errc::malformed, "--viewer-keystore or SDA_VIEWER_KEYSTORE is required");
    return cli::open_client(conn, keystore, cli::read_pin("Viewer PIN: ", "SDA_VIEWER_PIN"));
}

void print_report(const edoc::DocVerification& r) {
    for (const auto& s : r.per_signature) {
        std::cout << "signature " << s.signer.prefix() << ' ' << (s.valid ? "valid" : "INVALID") << ' ' << s.reason
                  << '\n';
    }
    for (const auto& v : r.view_binding_checks) {
        std::cout << "view " << v.signature_index << ' ' << v.stylesheet_id << ' ' << (v.ok ? "bound" : "BROKEN")
                  << ' ' << v.reason << '\n';
    }
    std::cout << (r.all_valid ? "VALID" : "INVALID") << '\n';
}

int sign(const cli::Connection& conn, const std::string& viewer_ks, const Target& t, const std::string& out,
         bool store, bool yes) {
    if (conn.keystore.empty()) throw error(errc::malformed, "--keystore (the signer's) is required");
    if (out.empty() && !store) throw error(errc::malformed, "nothing to do: give --out and/or --store");
    auto viewer = viewer_client(conn, viewer_ks);
    auto ref = t.ref();
    auto doc = ref.inline_doc ? *ref.inline_doc : viewer.get_doc(t.doc_id);
    if (!t.sheet() && !t.loc()) throw error(errc::malformed, "--stylesheet or --locale is required");
    auto view = viewer.render({std::nullopt, doc}, t.sheet(), t.loc());
    if (!cli::review(view, yes)) throw error(errc::user_abort, "confirmation code did not match");
    auto pin = cli::read_pin("Signer PIN: ");
    auto keystore = crypto::SoftKeystore::load(conn.keystore);
    auto signed_doc = client::wysiwys_sign(doc, view, keystore, pin, [](const auto&) { return true; });
    if (!out.empty()) write_file_atomic(out, edoc::serialize_doc(signed_doc));
    if (store) {
        auto signer = cli::open_client(conn, conn.keystore, pin);
        std::cout << "stored " << signer.store_doc(signed_doc) << '\n';
    }
    return cli::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Review-then-sign client"};
    app.require_subcommand(1);
    cli::Connection conn;
    add_connection_options(app, conn, false);
    std::string viewer_ks;
    app.add_option("--viewer-keystore", viewer_ks, "Viewer credential (default SDA_VIEWER_KEYSTORE)")
        ->check(CLI::ExistingFile);

    Target view_t;
    auto* view_cmd = app.add_subcommand("view", "Print the platform rendering of a document");
    add_target_options(*view_cmd, view_t);

    Target sign_t;
    std::string out;
    bool store = false;
    bool yes = false;
    auto* sign_cmd = app.add_subcommand("sign", "Review the rendering, then sign it with --keystore");
    add_target_options(*sign_cmd, sign_t);
    sign_cmd->add_option("--out", out, "Write the signed doc here");
    sign_cmd->add_flag("--store", store, "Store the signed doc with the signer's credential");
    sign_cmd->add_flag("--yes", yes, "Sign without typing the confirmation code");

    Target verify_t;
    auto* verify_cmd = app.add_subcommand("verify", "Check every signature and view binding");
    add_target_options(*verify_cmd, verify_t);

    if (auto rc = cli::parse(app, argc, argv)) return *rc;

    return cli::guarded([&] {
        if (sign_cmd->parsed()) return sign(conn, viewer_ks, sign_t, out, store, yes);
        auto viewer = viewer_client(conn, viewer_ks);
        if (view_cmd->parsed()) {
            if (!view_t.sheet() && !view_t.loc()) throw error(errc::malformed, "--stylesheet or --locale is required");
            auto view = viewer.render(view_t.ref(), view_t.sheet(), view_t.loc());
            std::cout << view.text << (view.text.ends_with('\n') ? "" : "\n");
            std::cerr << "view digest " << view.view_digest.hex() << '\n';
            return cli::kExitOk;
        }
        auto report = viewer.verify(verify_t.ref());
        print_report(report);
        return report.all_valid ? cli::kExitOk : cli::kExitRefused;
    });
}
