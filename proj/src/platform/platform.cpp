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

#include "sda/platform/platform.hpp"

#include "sda/common/error.hpp"

namespace sda::platform {

using proto::CommandKind;
using proto::Status;

namespace {

crypto::RoleCertificate load_role_set(const ServerConfig& config) {
    check_config(config);
    try {
        return crypto::load_certificate(config.role_set_certificate);
    } catch (const error& e) {
        throw error(errc::startup, "role-set certificate " + config.role_set_certificate.string() + ": " + e.what());
    }
}

const xml::Element& body_child(const proto::CommandEnvelope& env, std::string_view name) {
    const auto& body = env.body;
    if (body.children().size() != 1 || body.children().front().name() != name) {
        throw error(errc::malformed, std::string(proto::to_string(env.kind)) + " body must hold one <" +
                                         std::string(name) + ">");
    }
    return body.children().front();
}

void require_type(const RoleEntry& role, const std::string& type) {
    if (!role.type_allowed(type)) throw error(errc::type_not_allowed, type);
}

std::string violations_text(const edoc::ValidationReport& r) {
    std::string out;
    for (const auto& v : r.violations) {
        if (!out.empty()) out += ", ";
        out += edoc::to_string(v);
    }
    return out;
}

} // namespace

Status status_for(errc code) noexcept {
    switch (code) {
    case errc::unknown_role:
    case errc::command_not_allowed:
    case errc::type_not_allowed:
    case errc::bad_envelope_signature:
    case errc::replay:
    case errc::stale_timestamp:
    case errc::expired_certificate:
        return Status::denied;
    default:
        return Status::error;
    }
}

Platform::Platform(ServerConfig config, crypto::KeystoreSession platform_identity, Clock clock)
    : config_(std::move(config)),
      identity_(std::move(platform_identity)),
      clock_(std::move(clock)),
      started_at_(clock_()),
      roles_(load_role_set(config_)),
      repo_(Repository::open(config_.data_dir, config_.static_attributes)) {
    repo_.remember_certificate(roles_.find(roles_.role_set_fingerprint())->certificate);
    for (const auto& g : repo_.role_grants()) {
        try {
            roles_.install(g);
        } catch (const error& e) {
            throw error(errc::startup, std::string("corrupt roles.xml: ") + e.what());
        }
    }
    if (!config_.log_path.empty()) {
        log_.open(config_.log_path, std::ios::app);
        if (!log_) throw error(errc::startup, "cannot open log " + config_.log_path.string());
    }
    for (const auto& p : config_.ports) {
        bound_ports_[p.name] = p.tcp_port;
    }
}

Platform::~Platform() { shutdown(); }

void Platform::start() {
    std::lock_guard lock(ports_mutex_);
    for (const auto& p : config_.ports) {
        if (!running_.contains(p.name)) start_port_locked(p.name);
    }
}

void Platform::start_port_locked(const std::string& name) {
    const auto& pc = port_config(name);
    auto server = std::make_unique<PortServer>(
        pc.bind_address(), bound_ports_.at(name), config_.max_frame_bytes,
        [this, name](std::string_view request) { return handle_xml(request, name); },
        [this](const error& e) { return error_frame(e); });
    bound_ports_[name] = server->port();
    running_[name] = std::move(server);
}

void Platform::shutdown() {
    std::map<std::string, std::unique_ptr<PortServer>> stopping;
    {
        std::lock_guard lock(ports_mutex_);
        stopping.swap(running_);
    }
    for (auto& [name, server] : stopping) {
        server->stop();
    }
}

const PortConfig& Platform::port_config(const std::string& name) const {
    for (const auto& p : config_.ports) {
        if (p.name == name) return p;
    }
    throw error(errc::unknown_port, name);
}

std::uint16_t Platform::port(const std::string& name) const {
    std::lock_guard lock(ports_mutex_);
    auto it = bound_ports_.find(name);
    if (it == bound_ports_.end()) throw error(errc::unknown_port, name);
    return it->second;
}

proto::ResponseEnvelope Platform::respond(const std::string& nonce, Outcome out) const {
    return proto::make_response(nonce, out.status, std::move(out.code), std::move(out.payload), identity_, clock_());
}

std::string Platform::error_frame(const error& e) const {
    Outcome out{status_for(e.code()), std::string(to_string(e.code())), xml::Element{"payload"}};
    return xml::canonicalize(proto::to_xml(respond("", std::move(out))));
}

std::string Platform::handle_xml(std::string_view command_xml, const std::string& port_name) {
    proto::CommandEnvelope env;
    try {
        env = proto::command_from_xml(xml::parse(command_xml));
    } catch (const error& e) {
        Outcome out{Status::error, std::string(to_string(e.code())), xml::Element{"payload"}};
        log(port_name, "-", "?", out);
        return xml::canonicalize(proto::to_xml(respond("", std::move(out))));
    }
    return xml::canonicalize(proto::to_xml(handle(env, port_name)));
}

proto::ResponseEnvelope Platform::handle(const proto::CommandEnvelope& env, const std::string& port_name) {
    std::string fp_prefix = "-";
    Outcome out;
    try {
        const auto& port = port_config(port_name);
        auto fp = proto::verify_envelope(env, clock_(), nonces_, config_.replay_window);
        fp_prefix = fp.prefix();

        bool port_allows = (!port.allowed_kinds || port.allowed_kinds->contains(env.kind)) &&
                           (!proto::is_admin_kind(env.kind) || port.is_administration());

        if (env.kind == CommandKind::start_port || env.kind == CommandKind::stop_port) {
            {
                std::shared_lock lock(state_mutex_);
                if (auto deny = roles_.authorize(fp, env.kind)) throw error(*deny, "");
            }
            if (!port_allows) throw error(errc::command_not_allowed, "not on port " + port_name);
            out = control_port(env);
        } else if (proto::is_mutating(env.kind)) {
            std::unique_lock lock(state_mutex_);
            if (auto deny = roles_.authorize(fp, env.kind)) throw error(*deny, "");
            if (!port_allows) throw error(errc::command_not_allowed, "not on port " + port_name);
            out = execute(env, *roles_.find(fp));
        } else {
            std::shared_lock lock(state_mutex_);
            if (auto deny = roles_.authorize(fp, env.kind)) throw error(*deny, "");
            if (!port_allows) throw error(errc::command_not_allowed, "not on port " + port_name);
            out = execute(env, *roles_.find(fp));
        }
    } catch (const error& e) {
        out = Outcome{status_for(e.code()), std::string(to_string(e.code())), xml::Element{"payload"}};
        if (!e.detail().empty()) out.payload.add_leaf("detail", e.detail());
    } catch (const std::exception& e) {
        out = Outcome{Status::error, std::string(to_string(errc::internal)), xml::Element{"payload"}};
        out.payload.add_leaf("detail", e.what());
    }
    log(port_name, fp_prefix, proto::to_string(env.kind), out);
    return respond(env.nonce, std::move(out));
}

Platform::Outcome Platform::control_port(const proto::CommandEnvelope& env) {
    const auto& target = body_child(env, "port-control").required_attr("port");
    const auto& pc = port_config(target);
    if (env.kind == CommandKind::stop_port) {
        if (pc.is_administration()) throw error(errc::command_not_allowed, "the administration port cannot stop itself");
        std::unique_ptr<PortServer> victim;
        {
            std::lock_guard lock(ports_mutex_);
            if (auto it = running_.find(target); it != running_.end()) {
                victim = std::move(it->second);
                running_.erase(it);
            }
        }
        // Joined outside the lock: its connections may be waiting on it for STATUS.
        if (victim) victim->stop();
    } else {
        std::lock_guard lock(ports_mutex_);
        if (!running_.contains(target)) start_port_locked(target);
    }
    return {};
}

Platform::Outcome Platform::execute(const proto::CommandEnvelope& env, const RoleEntry& role) {
    Outcome out;
    auto stored = [&](const std::string& doc_id) -> const edoc::EDoc& {
        const auto* d = repo_.doc(doc_id);
        if (!d) throw error(errc::unknown_doc, doc_id);
        require_type(role, d->type_name);
        return *d;
    };
    auto resolve = [&](const proto::DocRef& ref) -> edoc::EDoc {
        if (ref.doc_id) return stored(*ref.doc_id);
        require_type(role, ref.inline_doc->type_name);
        return *ref.inline_doc;
    };

    switch (env.kind) {
    case CommandKind::install_definition: {
        auto def = edoc::definition_from_xml(body_child(env, "doctype"));
        require_type(role, def.type_name);
        repo_.install_definition(def);
        break;
    }
    case CommandKind::install_stylesheet: {
        auto sheet = edoc::stylesheet_from_xml(body_child(env, "stylesheet"));
        require_type(role, sheet.type_name);
        repo_.install_stylesheet(sheet);
        break;
    }
    case CommandKind::install_role: {
        auto grant = proto::role_grant_from_xml(body_child(env, "role"));
        auto next = roles_;
        next.install(grant);
        repo_.remember_certificate(grant.certificate);
        repo_.save_role_grants(next.grants());
        roles_ = std::move(next);
        break;
    }
    case CommandKind::revoke_role: {
        auto fp = crypto::Fingerprint::from_hex(body_child(env, "revoke").required_attr("fingerprint"));
        auto next = roles_;
        next.revoke(fp);
        repo_.save_role_grants(next.grants());
        roles_ = std::move(next);
        break;
    }
    case CommandKind::create_doc: {
        const auto& c = body_child(env, "create");
        const auto& type = c.required_attr("type");
        require_type(role, type);
        const edoc::DocTypeDefinition* def = nullptr;
        if (auto v = c.attr("version")) {
            int version = 0;
            try {
                version = std::stoi(*v);
            } catch (const std::exception&) {
                throw error(errc::malformed, "bad version " + *v);
            }
            def = repo_.definition(type, version);
        } else {
            def = repo_.latest(type);
        }
        if (!def) throw error(errc::unknown_type, type);
        std::map<std::string, std::string> values;
        for (const auto* f : c.children_named("field")) {
            values[f->required_attr("name")] = f->text();
        }
        try {
            out.payload.add(edoc::to_xml(edoc::create_doc(*def, values, clock_())));
        } catch (const edoc::ValidationError& e) {
            throw error(errc::validation_failed, violations_text(e.report()));
        }
        break;
    }
    case CommandKind::store_doc: {
        auto doc = edoc::doc_from_xml(body_child(env, "store").required_child("edoc"));
        require_type(role, doc.type_name);
        try {
            out.payload = proto::stored_payload(repo_.store(std::move(doc)));
        } catch (const edoc::ValidationError& e) {
            throw error(errc::validation_failed, violations_text(e.report()));
        }
        break;
    }
    case CommandKind::get_doc:
        out.payload.add(edoc::to_xml(stored(body_child(env, "get").required_attr("doc-id"))));
        break;
    case CommandKind::search_docs: {
        auto q = proto::search_query_from_xml(body_child(env, "search"));
        if (q.type_name) require_type(role, *q.type_name);
        std::vector<proto::SearchHit> hits;
        for (const auto* d : repo_.docs()) {
            if (q.type_name && d->type_name != *q.type_name) continue;
            if (!role.type_allowed(d->type_name)) continue;
            bool match = true;
            for (const auto& [name, value] : q.attributes) {
                auto it = d->attributes.find(name);
                if (it == d->attributes.end() || it->second != value) {
                    match = false;
                    break;
                }
            }
            if (match) hits.push_back({d->doc_id, d->type_name});
        }
        out.payload = proto::search_payload(hits);
        break;
    }
    case CommandKind::render_doc: {
        const auto& r = body_child(env, "render");
        auto doc = resolve(proto::doc_ref_from_xml(r));
        std::optional<edoc::Stylesheet> sheet;
        if (auto id = r.attr("stylesheet")) {
            sheet = repo_.stylesheet(*id);
            if (!sheet) throw error(errc::unknown_stylesheet, *id);
        } else if (auto locale = r.attr("locale")) {
            sheet = repo_.stylesheet_for(doc.type_name, *locale);
            if (!sheet) throw error(errc::unknown_stylesheet, doc.type_name + "/" + *locale);
        } else {
            throw error(errc::malformed, "<render> needs stylesheet or locale");
        }
        out.payload.add(edoc::to_xml(edoc::render(doc, *sheet)));
        break;
    }
    case CommandKind::verify_doc: {
        auto doc = resolve(proto::doc_ref_from_xml(body_child(env, "verify")));
        out.payload.add(edoc::to_xml(repo_.verify(doc)));
        break;
    }
    case CommandKind::set_attribute: {
        const auto& s = body_child(env, "set-attribute");
        const auto& id = s.required_attr("doc-id");
        (void)stored(id);
        repo_.set_attribute(id, s.required_attr("name"), s.text());
        break;
    }
    case CommandKind::get_attribute: {
        const auto& g = body_child(env, "get-attribute");
        const auto& name = g.required_attr("name");
        out.payload = proto::attribute_payload(name, edoc::get_attribute(stored(g.required_attr("doc-id")), name));
        break;
    }
    case CommandKind::list_types: {
        auto all = repo_.catalog();
        proto::TypeCatalog visible;
        for (auto& d : all.definitions) {
            if (role.type_allowed(d.type_name)) visible.definitions.push_back(std::move(d));
        }
        for (auto& s : all.stylesheets) {
            if (role.type_allowed(s.type_name)) visible.stylesheets.push_back(std::move(s));
        }
        out.payload = proto::catalog_payload(visible);
        break;
    }
    case CommandKind::status:
        out.payload = proto::status_payload(status_locked());
        break;
    case CommandKind::start_port:
    case CommandKind::stop_port:
        throw error(errc::internal, "port control dispatched as a repository command");
    }
    return out;
}

proto::PlatformStatus Platform::status_locked() const {
    proto::PlatformStatus s;
    s.uptime_seconds = static_cast<long>((clock_() - started_at_).count());
    s.docs = repo_.doc_count();
    s.definitions = repo_.definition_count();
    s.stylesheets = repo_.stylesheet_count();
    s.roles = roles_.entries().size();
    std::lock_guard lock(ports_mutex_);
    for (const auto& p : config_.ports) {
        s.ports.push_back({p.name, bound_ports_.at(p.name), running_.contains(p.name),
                           std::string(to_string(p.visibility))});
    }
    return s;
}

proto::PlatformStatus Platform::status() const {
    std::shared_lock lock(state_mutex_);
    return status_locked();
}

std::vector<std::string> Platform::audit() const {
    std::shared_lock lock(state_mutex_);
    return repo_.audit();
}

void Platform::log(const std::string& port, const std::string& fp_prefix, std::string_view kind, const Outcome& out) {
    if (!log_.is_open()) return;
    std::lock_guard lock(log_mutex_);
    log_ << format_timestamp(system_now()) << ' ' << port << ' ' << fp_prefix << ' ' << kind << ' '
         << proto::to_string(out.status) << ' ' << (out.code.empty() ? "-" : out.code) << '\n';
    log_.flush();
}

} // namespace sda::platform
