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

#include "sda/medreg/facade.hpp"

#include "sda/crypto/encoding.hpp"
#include "wire.hpp"

#include <httplib.h>

#include <map>
#include <thread>

namespace sda::medreg {

using wire::json;

int http_status_for(errc code, bool platform_denied) {
    if (platform_denied) return 403;
    switch (code) {
    case errc::unauthenticated:
        return 401;
    case errc::denied:
        return 403;
    case errc::unknown_visit:
    case errc::unknown_doc:
        return 404;
    case errc::stale_version:
    case errc::not_lease_holder:
    case errc::lease_held_by_other:
    case errc::already_processed:
        return 409;
    case errc::platform_unavailable:
        return 503;
    case errc::internal:
    case errc::storage:
        return 500;
    default:
        return 400;
    }
}

namespace {

struct Session {
    std::string principal_id;
    Timestamp expires_at;
};

void reply_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), wire::kJson);
}

void reply_error(httplib::Response& res, errc code, const std::string& detail) {
    reply_json(res, http_status_for(code, false), wire::error_body("ERROR", to_string(code), detail));
}

json parse_body(const httplib::Request& req) {
    auto j = json::parse(req.body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw error(errc::malformed, "request body is not a JSON object");
    return j;
}

} // namespace

struct Facade::Impl {
    MedregService& service;
    FacadeOptions options;
    Clock clock;
    httplib::Server server;
    std::thread thread;
    std::mutex mutex;
    std::map<std::string, Session> challenges;
    std::map<std::string, Session> sessions;

    Impl(MedregService& s, FacadeOptions o, Clock c) : service(s), options(std::move(o)), clock(std::move(c)) {}

    Principal authenticate(const httplib::Request& req) {
        auto header = req.get_header_value("Authorization");
        constexpr std::string_view kBearer = "Bearer ";
        if (header.rfind(kBearer, 0) != 0) throw error(errc::unauthenticated, "missing bearer token");
        auto token = header.substr(kBearer.size());
        std::string id;
        {
            std::lock_guard lock(mutex);
            auto it = sessions.find(token);
            if (it == sessions.end() || it->second.expires_at < clock()) {
                throw error(errc::unauthenticated, "unknown or expired session");
            }
            id = it->second.principal_id;
        }
        auto p = service.db().principal(id);
        if (!p) throw error(errc::unauthenticated, "principal " + id + " no longer exists");
        return *p;
    }

    json open_session(const json& body) {
        auto id = body.at("principal").get<std::string>();
        auto principal = service.db().principal(id);
        auto now = clock();
        std::lock_guard lock(mutex);
        std::erase_if(challenges, [&](const auto& kv) { return kv.second.expires_at < now; });
        std::erase_if(sessions, [&](const auto& kv) { return kv.second.expires_at < now; });
        if (!body.contains("proof")) {
            // Unknown principals get a challenge too, so ids cannot be probed.
            auto challenge = crypto::random_hex(32);
            challenges[challenge] = {id, now + options.challenge_ttl};
            return {{"challenge", challenge}};
        }
        auto challenge = body.at("challenge").get<std::string>();
        auto it = challenges.find(challenge);
        if (it == challenges.end() || it->second.principal_id != id) {
            throw error(errc::unauthenticated, "unknown or expired challenge");
        }
        challenges.erase(it);
        if (!principal) throw error(errc::unauthenticated, "proof rejected");
        auto cert = crypto::certificate_from_xml(xml::parse(principal->certificate_xml));
        auto block = crypto::signature_from_xml(xml::parse(body.at("proof").get<std::string>()));
        auto report = crypto::verify_signature(cert, wire::session_proof_bytes(id, challenge), block);
        if (!report.valid || !cert.valid_at(now)) throw error(errc::unauthenticated, "proof rejected");
        auto token = crypto::random_hex(32);
        auto expires = now + options.session_ttl;
        sessions[token] = {id, expires};
        return {{"token", token},
                {"principal", id},
                {"role", std::string(to_string(principal->role))},
                {"expires_at", format_timestamp(expires)}};
    }

    template <typename Fn>
    httplib::Server::Handler guarded(Fn fn) {
        return [this, fn](const httplib::Request& req, httplib::Response& res) {
            try {
                fn(req, res);
            } catch (const client::PlatformError& e) {
                auto slash = e.verbatim().find('/');
                auto status = e.verbatim().substr(0, slash);
                reply_json(res, http_status_for(e.code(), status == "DENIED"),
                           wire::error_body(status, e.verbatim().substr(slash + 1), e.detail()));
            } catch (const error& e) {
                reply_error(res, e.code(), e.detail());
            } catch (const json::exception& e) {
                reply_error(res, errc::malformed, e.what());
            } catch (const std::exception& e) {
                reply_error(res, errc::internal, e.what());
            }
        };
    }

    void routes() {
        server.Post("/session", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        reply_json(res, 200, open_session(parse_body(req)));
                    }));

        server.Get("/worklist", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       auto who = authenticate(req);
                       auto date = req.get_param_value("date");
                       if (date.empty()) date = format_date(clock());
                       if (who.role == PrincipalRole::physician) {
                           reply_json(res, 200, wire::to_json(service.checkout(who, date)));
                           return;
                       }
                       Snapshot listing{"", date, clock(), service.worklist(who, date), {}};
                       reply_json(res, 200, wire::to_json(listing));
                   }));

        server.Post("/visits", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        auto who = authenticate(req);
                        auto id = service.register_visit(who, wire::new_visit_from_json(parse_body(req)));
                        reply_json(res, 201, {{"visit_id", id}});
                    }));

        server.Post("/sync", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        auto who = authenticate(req);
                        auto body = parse_body(req);
                        std::vector<PushItem> items;
                        for (const auto& i : body.at("items")) items.push_back(wire::push_item_from_json(i));
                        auto results = service.sync(who, items);
                        json out = json::array();
                        bool conflict = false;
                        for (const auto& r : results) {
                            out.push_back(wire::to_json(r));
                            conflict = conflict || r.outcome != PushOutcome::ok;
                        }
                        reply_json(res, conflict ? 409 : 200, {{"results", out}});
                    }));

        server.Post("/emr/generate", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        auto who = authenticate(req);
                        auto g = service.generate_emr(who, parse_body(req).at("visit_id").get<std::string>());
                        reply_json(res, 200,
                                   {{"visit_id", g.visit_id},
                                    {"edoc", edoc::serialize_doc(g.doc)},
                                    {"view", wire::to_json(g.view)}});
                    }));

        server.Post("/emr/store", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        auto who = authenticate(req);
                        auto doc = edoc::parse_doc(parse_body(req).at("edoc").get<std::string>());
                        auto s = service.store_signed_emr(who, doc);
                        reply_json(res, 200,
                                   {{"visit_id", s.visit_id}, {"doc_id", s.doc_id}, {"already_stored", s.already_stored}});
                    }));

        server.Get(R"(/emr/([^/]+)/print)", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       auto who = authenticate(req);
                       auto p = service.print_emr(who, req.matches[1]);
                       auto body = wire::to_json(p.view);
                       body["doc_id"] = p.doc_id;
                       reply_json(res, 200, body);
                   }));

        server.Get(R"(/history/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       auto who = authenticate(req);
                       std::string code = req.matches[1];
                       json out = json::array();
                       for (const auto& h : service.history(who, code)) out.push_back(wire::to_json(h));
                       reply_json(res, 200, {{"patient_code", code}, {"history", out}});
                   }));

        if (options.static_dir) server.set_mount_point("/", options.static_dir->string());
    }
};

Facade::Facade(MedregService& service, FacadeOptions options, Clock clock)
    : impl_(std::make_unique<Impl>(service, std::move(options), std::move(clock))) {
    impl_->routes();
}

Facade::~Facade() { stop(); }

std::uint16_t Facade::start(const std::string& host, std::uint16_t port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw error(errc::startup, "facade cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return static_cast<std::uint16_t>(bound);
}

void Facade::run(const std::string& host, std::uint16_t port) {
    if (!impl_->server.listen(host, port)) {
        throw error(errc::startup, "facade cannot listen on " + host + ":" + std::to_string(port));
    }
}

void Facade::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

} // namespace sda::medreg
