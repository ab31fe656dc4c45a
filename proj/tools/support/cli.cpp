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

#include "cli.hpp"

#include "sda/proto/transport.hpp"

#include <termios.h>
#include <unistd.h>

#include <cstdlib>
#include <iostream>

namespace sda::cli {

bool stdin_is_terminal() { return ::isatty(STDIN_FILENO) == 1; }

std::string read_line(const std::string& prompt) {
    std::cerr << prompt << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) throw error(errc::user_abort, "no input");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::string read_pin(const std::string& prompt, const char* env_var) {
    if (env_var) {
        if (const char* v = std::getenv(env_var)) return v;
    }
    if (!stdin_is_terminal()) return read_line("");
    termios saved{};
    ::tcgetattr(STDIN_FILENO, &saved);
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    ::tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
    std::string pin;
    try {
        pin = read_line(prompt);
    } catch (...) {
        ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
        throw;
    }
    ::tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cerr << '\n';
    return pin;
}

void add_connection_options(CLI::App& app, Connection& c, bool keystore_required) {
    auto* platform = app.add_option("--platform", c.platform, "Platform port as host:port");
    auto* gateway = app.add_option("--gateway", c.gateway, "Gateway URL, e.g. http://127.0.0.1:8080");
    platform->excludes(gateway);
    auto* ks = app.add_option("--keystore", c.keystore, "Keystore file")->check(CLI::ExistingFile);
    if (keystore_required) ks->required();
    app.add_option("--platform-cert", c.platform_cert, "Platform certificate; replies are checked against it")
        ->check(CLI::ExistingFile);
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon == std::string::npos || colon == 0) throw error(errc::malformed, "expected host:port, got " + text);
    try {
        auto port = std::stoul(text.substr(colon + 1));
        if (port > 65535) throw std::out_of_range("port");
        return {text.substr(0, colon), static_cast<std::uint16_t>(port)};
    } catch (const std::logic_error&) {
        throw error(errc::malformed, "bad port in " + text);
    }
}

std::unique_ptr<proto::Transport> open_transport(const Connection& c) {
    if (!c.gateway.empty()) return std::make_unique<proto::GatewayTransport>(c.gateway);
    if (c.platform.empty()) throw error(errc::malformed, "one of --platform or --gateway is required");
    auto [host, port] = split_host_port(c.platform);
    return std::make_unique<proto::TcpTransport>(host, port);
}

client::Client open_client(const Connection& c, const std::string& keystore_path, const std::string& pin) {
    auto ks = crypto::SoftKeystore::load(keystore_path);
    std::optional<crypto::RoleCertificate> platform_cert;
    if (!c.platform_cert.empty()) platform_cert = crypto::load_certificate(c.platform_cert);
    return client::Client(open_transport(c), ks.open(pin), std::move(platform_cert));
}

client::Client open_client(const Connection& c) {
    if (c.keystore.empty()) throw error(errc::malformed, "--keystore is required");
    return open_client(c, c.keystore, read_pin("PIN: "));
}

std::map<std::string, std::string> parse_assignments(const std::vector<std::string>& items) {
    std::map<std::string, std::string> out;
    for (const auto& item : items) {
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw error(errc::malformed, "expected name=value, got " + item);
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

bool review(const edoc::RenderedView& view, bool assume_yes) {
    std::cout << "----- " << view.stylesheet_id << " (" << view.locale << ") -----\n"
              << view.text << (view.text.ends_with('\n') ? "" : "\n")
              << "----- view digest " << view.view_digest.hex() << " -----\n"
              << std::flush;
    if (assume_yes) return true;
    auto code = client::confirmation_code();
    auto typed = read_line("Type " + code + " to sign this text: ");
    return typed == code;
}

void report_refusal(const std::string& verbatim, const std::string& detail) {
    std::cerr << verbatim;
    if (!detail.empty()) std::cerr << ": " << detail;
    std::cerr << '\n';
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const client::PlatformError& e) {
        report_refusal(e.verbatim(), e.detail());
        return kExitRefused;
    } catch (const error& e) {
        std::cerr << e.what() << '\n';
        return kExitLocal;
    } catch (const std::exception& e) {
        std::cerr << "INTERNAL: " << e.what() << '\n';
        return kExitLocal;
    }
}

std::optional<int> parse(CLI::App& app, int argc, char** argv) {
    try {
        app.parse(argc, argv);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitLocal;
    }
}

} // namespace sda::cli
