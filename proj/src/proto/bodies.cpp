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

#include "sda/proto/bodies.hpp"

#include "sda/common/error.hpp"

namespace sda::proto {

namespace {

xml::Element wrap(const char* outer, xml::Element inner) {
    xml::Element e{outer};
    e.add(std::move(inner));
    return e;
}

xml::Element body_of(xml::Element inner) { return wrap("body", std::move(inner)); }
xml::Element payload_of(xml::Element inner) { return wrap("payload", std::move(inner)); }

const xml::Element& only_child(const xml::Element& outer, std::string_view name) {
    if (outer.children().size() != 1 || outer.children().front().name() != name) {
        throw error(errc::malformed, "expected a single <" + std::string(name) + "> in <" + outer.name() + ">");
    }
    return outer.children().front();
}

std::size_t count_attr(const xml::Element& e, std::string_view key) {
    auto v = e.required_attr(key);
    try {
        return static_cast<std::size_t>(std::stoull(v));
    } catch (const std::exception&) {
        throw error(errc::malformed, "bad count in " + std::string(key));
    }
}

} // namespace

xml::Element to_xml(const RoleGrant& grant) {
    xml::Element e{"role"};
    e.add(crypto::to_xml(grant.certificate));
    auto& kinds = e.add(xml::Element{"allowed-kinds"});
    for (auto k : grant.kinds) {
        kinds.add_leaf("kind", std::string(to_string(k)));
    }
    auto& types = e.add(xml::Element{"allowed-types"});
    if (!grant.doc_types) {
        types.set("all", "true");
    } else {
        types.set("all", "false");
        for (const auto& t : *grant.doc_types) {
            types.add_leaf("type", t);
        }
    }
    return e;
}

RoleGrant role_grant_from_xml(const xml::Element& e) {
    if (e.name() != "role") throw error(errc::malformed, "expected <role>");
    RoleGrant g;
    g.certificate = crypto::certificate_from_xml(e.required_child("certificate"));
    for (const auto* k : e.required_child("allowed-kinds").children_named("kind")) {
        g.kinds.insert(parse_command_kind(k->text()));
    }
    const auto& types = e.required_child("allowed-types");
    auto all = types.required_attr("all");
    if (all == "true") {
        if (!types.children().empty()) throw error(errc::malformed, "allowed-types all=true lists types");
    } else if (all == "false") {
        g.doc_types.emplace();
        for (const auto* t : types.children_named("type")) {
            g.doc_types->insert(t->text());
        }
    } else {
        throw error(errc::malformed, "allowed-types all must be true or false");
    }
    return g;
}

xml::Element install_definition_body(const edoc::DocTypeDefinition& def) { return body_of(edoc::to_xml(def)); }

xml::Element install_stylesheet_body(const edoc::Stylesheet& sheet) { return body_of(edoc::to_xml(sheet)); }

xml::Element install_role_body(const RoleGrant& grant) { return body_of(to_xml(grant)); }

xml::Element revoke_role_body(const crypto::Fingerprint& fp) {
    xml::Element e{"revoke"};
    e.set("fingerprint", fp.hex());
    return body_of(std::move(e));
}

xml::Element create_doc_body(const std::string& type_name, std::optional<int> version,
                             const std::map<std::string, std::string>& values) {
    xml::Element e{"create"};
    e.set("type", type_name);
    if (version) e.set("version", std::to_string(*version));
    for (const auto& [name, value] : values) {
        e.add_leaf("field", value).set("name", name);
    }
    return body_of(std::move(e));
}

xml::Element store_doc_body(const edoc::EDoc& doc) { return body_of(wrap("store", edoc::to_xml(doc))); }

xml::Element get_doc_body(const std::string& doc_id) {
    xml::Element e{"get"};
    e.set("doc-id", doc_id);
    return body_of(std::move(e));
}

xml::Element search_body(const SearchQuery& query) {
    xml::Element e{"search"};
    if (query.type_name) e.set("type", *query.type_name);
    for (const auto& [name, value] : query.attributes) {
        e.add_leaf("attr", value).set("name", name);
    }
    return body_of(std::move(e));
}

namespace {
void put_ref(xml::Element& e, const DocRef& ref) {
    if (ref.doc_id) e.set("doc-id", *ref.doc_id);
    if (ref.inline_doc) e.add(edoc::to_xml(*ref.inline_doc));
}
} // namespace

xml::Element render_body(const DocRef& ref, const std::optional<std::string>& stylesheet_id,
                         const std::optional<std::string>& locale) {
    xml::Element e{"render"};
    put_ref(e, ref);
    if (stylesheet_id) e.set("stylesheet", *stylesheet_id);
    if (locale) e.set("locale", *locale);
    return body_of(std::move(e));
}

xml::Element verify_body(const DocRef& ref) {
    xml::Element e{"verify"};
    put_ref(e, ref);
    return body_of(std::move(e));
}

xml::Element set_attribute_body(const std::string& doc_id, const std::string& name, const std::string& value) {
    xml::Element e{"set-attribute"};
    e.set("doc-id", doc_id);
    e.set("name", name);
    e.set_text(value);
    return body_of(std::move(e));
}

xml::Element get_attribute_body(const std::string& doc_id, const std::string& name) {
    xml::Element e{"get-attribute"};
    e.set("doc-id", doc_id);
    e.set("name", name);
    return body_of(std::move(e));
}

xml::Element port_control_body(const std::string& port_name) {
    xml::Element e{"port-control"};
    e.set("port", port_name);
    return body_of(std::move(e));
}

xml::Element empty_body() { return xml::Element{"body"}; }

DocRef doc_ref_from_xml(const xml::Element& e) {
    DocRef ref;
    ref.doc_id = e.attr("doc-id");
    if (const auto* d = e.child("edoc")) ref.inline_doc = edoc::doc_from_xml(*d);
    if (ref.doc_id.has_value() == ref.inline_doc.has_value()) {
        throw error(errc::malformed, "<" + e.name() + "> needs exactly one of doc-id or an inline <edoc>");
    }
    return ref;
}

SearchQuery search_query_from_xml(const xml::Element& e) {
    SearchQuery q;
    q.type_name = e.attr("type");
    for (const auto* a : e.children_named("attr")) {
        q.attributes[a->required_attr("name")] = a->text();
    }
    return q;
}

xml::Element stored_payload(const std::string& doc_id) {
    xml::Element e{"stored"};
    e.set("doc-id", doc_id);
    return payload_of(std::move(e));
}

std::string stored_doc_id(const xml::Element& payload) { return only_child(payload, "stored").required_attr("doc-id"); }

edoc::EDoc doc_payload(const xml::Element& payload) { return edoc::doc_from_xml(only_child(payload, "edoc")); }

edoc::RenderedView view_payload(const xml::Element& payload) { return edoc::view_from_xml(only_child(payload, "view")); }

edoc::DocVerification verification_payload(const xml::Element& payload) {
    return edoc::verification_from_xml(only_child(payload, "verification"));
}

xml::Element search_payload(const std::vector<SearchHit>& hits) {
    xml::Element e{"results"};
    for (const auto& h : hits) {
        auto& d = e.add(xml::Element{"doc"});
        d.set("id", h.doc_id);
        d.set("type", h.type_name);
    }
    return payload_of(std::move(e));
}

std::vector<SearchHit> search_hits(const xml::Element& payload) {
    std::vector<SearchHit> hits;
    for (const auto* d : only_child(payload, "results").children_named("doc")) {
        hits.push_back({d->required_attr("id"), d->required_attr("type")});
    }
    return hits;
}

xml::Element attribute_payload(const std::string& name, const std::optional<std::string>& value) {
    xml::Element e{"attribute"};
    e.set("name", name);
    e.set("present", value ? "true" : "false");
    if (value) e.set_text(*value);
    return payload_of(std::move(e));
}

std::optional<std::string> attribute_value(const xml::Element& payload) {
    const auto& e = only_child(payload, "attribute");
    if (e.required_attr("present") != "true") return std::nullopt;
    return e.text();
}

xml::Element status_payload(const PlatformStatus& s) {
    xml::Element e{"status"};
    e.set("uptime-seconds", std::to_string(s.uptime_seconds));
    e.set("docs", std::to_string(s.docs));
    e.set("definitions", std::to_string(s.definitions));
    e.set("stylesheets", std::to_string(s.stylesheets));
    e.set("roles", std::to_string(s.roles));
    for (const auto& p : s.ports) {
        auto& pe = e.add(xml::Element{"port"});
        pe.set("name", p.name);
        pe.set("tcp-port", std::to_string(p.tcp_port));
        pe.set("state", p.running ? "running" : "stopped");
        pe.set("visibility", p.visibility);
    }
    return payload_of(std::move(e));
}

PlatformStatus platform_status(const xml::Element& payload) {
    const auto& e = only_child(payload, "status");
    PlatformStatus s;
    s.uptime_seconds = static_cast<long>(count_attr(e, "uptime-seconds"));
    s.docs = count_attr(e, "docs");
    s.definitions = count_attr(e, "definitions");
    s.stylesheets = count_attr(e, "stylesheets");
    s.roles = count_attr(e, "roles");
    for (const auto* p : e.children_named("port")) {
        s.ports.push_back({p->required_attr("name"), static_cast<int>(count_attr(*p, "tcp-port")),
                           p->required_attr("state") == "running", p->required_attr("visibility")});
    }
    return s;
}

xml::Element catalog_payload(const TypeCatalog& catalog) {
    xml::Element e{"types"};
    for (const auto& d : catalog.definitions) {
        e.add(edoc::to_xml(d));
    }
    for (const auto& s : catalog.stylesheets) {
        e.add(edoc::to_xml(s));
    }
    return payload_of(std::move(e));
}

TypeCatalog type_catalog(const xml::Element& payload) {
    TypeCatalog c;
    const auto& e = only_child(payload, "types");
    for (const auto* d : e.children_named("doctype")) {
        c.definitions.push_back(edoc::definition_from_xml(*d));
    }
    for (const auto* s : e.children_named("stylesheet")) {
        c.stylesheets.push_back(edoc::stylesheet_from_xml(*s));
    }
    return c;
}

} // namespace sda::proto
