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

// platform: run the document platform, query it, or run an HTTP gateway in front of it.

#include "../support/cli.hpp"

#include "sda/platform/platform.hpp"

#include <csignal>
#include <iostream>

using namespace sda;

namespace {

/// Blocks SIGINT/SIGTERM so that worker threads inherit the mask; returns the set to wait on.
sigset_t block_stop_signals() {
    sigset_t set;
    sigemptyset(&set);
    sigaddset(&set, SIGINT);
    sigaddset(&set, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &set, nullptr);
    return set;
}

void wait_for_stop(const sigset_t& set) {
    int sig = 0;
    sigwait(&set, &sig);
}

int serve(const std::string& config_path) {
    auto stop = block_stop_signals();
    auto config = platform::load_config(config_path);
    auto pin = config.platform_pin.empty() ? cli::read_pin("Platform PIN: ", "SDA_PLATFORM_PIN") : config.platform_pin;
    auto keystore = crypto::SoftKeystore::load(config.platform_keystore);
    platform::Platform server(config, keystore.open(pin));
    server.start();
    for (const auto& p : server.config().ports) {
        std::cout << "listening " << p.name << ' ' << p.bind_address() << ':' << server.port(p.name) << '\n';
    }
    std::cout << "ready " << server.certificate().subject_name << ' ' << crypto::fingerprint(server.certificate()).hex()
              << std::endl;
    wait_for_stop(stop);
    server.shutdown();
    return cli::kExitOk;
}

int status(const cli::Connection& c) {
    auto client = cli::open_client(c);
    auto s = client.status();
    std::cout << "uptime       " << s.uptime_seconds << "s\n"
              << "docs         " << s.docs << '\n'
              << "definitions  " << s.definitions << '\n'
              << "stylesheets  " << s.stylesheets << '\n'
              << "roles        " << s.roles << '\n';
    for (const auto& p : s.ports) {
        std::cout << "port         " << p.name << ' ' << p.tcp_port << ' ' << p.visibility << ' '
                  << (p.running ? "running" : "stopped") << '\n';
    }
    return cli::kExitOk;
}

int gateway(const std::string& listen, const std::string& upstream) {
    auto stop = block_stop_signals();
    auto [up_host, up_port] = cli::split_host_port(upstream);
    auto [host, port] = cli::split_host_port(listen);
    proto::Gateway gw(up_host, up_port);
    auto bound = gw.start(host, port);
    std::cout << "listening gateway " << host << ':' << bound << " -> " << upstream << std::endl;
    wait_for_stop(stop);
    gw.stop();
    return cli::kExitOk;
}

int port_control(const cli::Connection& c, const std::string& name, bool start) {
    auto client = cli::open_client(c);
    if (start) {
        client.start_port(name);
    } else {
        client.stop_port(name);
    }
    return cli::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Document platform"};
    app.require_subcommand(1);

    std::string config_path;
    auto* serve_cmd = app.add_subcommand("serve", "Open the configured ports and serve until SIGINT/SIGTERM");
    serve_cmd->add_option("--config", config_path, "Server configuration file")->required()->check(CLI::ExistingFile);

    cli::Connection admin;
    auto* status_cmd = app.add_subcommand("status", "Query the administration port");
    status_cmd->add_option("--admin", admin.platform, "Administration port as host:port")->required();
    status_cmd->add_option("--keystore", admin.keystore, "Role-set keystore")->required()->check(CLI::ExistingFile);
    status_cmd->add_option("--platform-cert", admin.platform_cert)->check(CLI::ExistingFile);

    std::string port_name;
    auto* start_cmd = app.add_subcommand("start-port", "Start a stopped port");
    auto* stop_cmd = app.add_subcommand("stop-port", "Stop a running port");
    for (auto* cmd : {start_cmd, stop_cmd}) {
        cmd->add_option("name", port_name, "scenario or service")->required();
        cmd->add_option("--admin", admin.platform, "Administration port as host:port")->required();
        cmd->add_option("--keystore", admin.keystore, "Role-set keystore")->required()->check(CLI::ExistingFile);
        cmd->add_option("--platform-cert", admin.platform_cert)->check(CLI::ExistingFile);
    }

    std::string listen = "127.0.0.1:0";
    std::string upstream;
    auto* gw_cmd = app.add_subcommand("gateway", "Tunnel HTTP POSTs to one platform port");
    gw_cmd->add_option("--listen", listen, "host:port to listen on (port 0 picks one)");
    gw_cmd->add_option("--upstream", upstream, "Platform port as host:port")->required();

    if (auto rc = cli::parse(app, argc, argv)) return *rc;

    return cli::guarded([&] {
        if (serve_cmd->parsed()) return serve(config_path);
        if (status_cmd->parsed()) return status(admin);
        if (start_cmd->parsed()) return port_control(admin, port_name, true);
        if (stop_cmd->parsed()) return port_control(admin, port_name, false);
        return gateway(listen, upstream);
    });
}
