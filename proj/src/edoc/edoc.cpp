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

#include "sda/edoc/edoc.hpp"

#include <algorithm>

namespace sda::edoc {
namespace {

std::string_view violation_name(ViolationKind kind) {
    switch (kind) {
    case ViolationKind::missing_field: return "MISSING_FIELD";
    case ViolationKind::bad_value: return "BAD_VALUE";
    case ViolationKind::unknown_field: return "UNKNOWN_FIELD";
    }
    return "BAD_VALUE";
}

std::string describe(const ValidationReport& report) {
    std::string out;
    for (const auto& v : report.violations) {
        if (!out.empty()) {
            out += ", ";
        }
        out += to_string(v);
    }
    return out;
}

xml::Element fields_element(const EDoc& doc) {
    xml::Element fields("fields");
    for (const auto& [name, value] : doc.field_values) {
        fields.add_leaf("field", value).set("name", name);
    }
    return fields;
}

xml::Element content_element(const EDoc& doc) {
    xml::Element e("edoc");
    e.set("type", doc.type_name);
    e.set("version", std::to_string(doc.type_version));
    e.set("created", format_timestamp(doc.created_at));
    e.add(fields_element(doc));
    return e;
}

std::map<std::string, std::string> named_leaves(const xml::Element& parent, std::string_view leaf) {
    std::map<std::string, std::string> out;
    for (const auto& c : parent.children()) {
        if (c.name() != leaf) {
            throw error(errc::malformed, "unexpected <" + c.name() + "> in <" + parent.name() + ">");
        }
        if (!c.children().empty()) {
            throw error(errc::malformed, "<" + std::string(leaf) + "> must hold text only");
        }
        if (!out.emplace(c.required_attr("name"), c.text()).second) {
            throw error(errc::malformed, "duplicate " + std::string(leaf) + " '" + c.required_attr("name") + "'");
        }
    }
    return out;
}

} // namespace

std::string to_string(const Violation& v) {
    return std::string(violation_name(v.kind)) + "(" + v.field + ")";
}

ValidationError::ValidationError(ValidationReport report)
    : error(errc::validation_failed, describe(report)), report_(std::move(report)) {}

ValidationReport validate_doc(const DocTypeDefinition& def, const EDoc& doc) {
    if (doc.type_name != def.type_name) {
        throw error(errc::type_mismatch, "document of type " + doc.type_name + " against definition " + def.type_name);
    }
    ValidationReport report;
    for (const auto& spec : def.fields) {
        auto it = doc.field_values.find(spec.name);
        if (it == doc.field_values.end()) {
            if (spec.required) {
                report.violations.push_back({ViolationKind::missing_field, spec.name});
            }
        } else if (!value_conforms(spec, it->second)) {
            report.violations.push_back({ViolationKind::bad_value, spec.name});
        }
    }
    for (const auto& [name, value] : doc.field_values) {
        if (def.field(name) == nullptr) {
            report.violations.push_back({ViolationKind::unknown_field, name});
        }
    }
    report.ok = report.violations.empty();
    return report;
}

EDoc create_doc(const DocTypeDefinition& def, const std::map<std::string, std::string>& values,
                Timestamp created_at) {
    EDoc doc;
    doc.type_name = def.type_name;
    doc.type_version = def.version;
    doc.created_at = created_at;
    for (const auto& spec : def.fields) {
        if (spec.default_value) {
            doc.field_values[spec.name] = *spec.default_value;
        }
    }
    ValidationReport unrepresentable;
    for (const auto& [name, value] : values) {
        if (!xml::representable(value)) {
            unrepresentable.violations.push_back({ViolationKind::bad_value, name});
            continue;
        }
        doc.field_values[name] = xml::nfc(value);
    }
    auto report = validate_doc(def, doc);
    report.violations.insert(report.violations.begin(), unrepresentable.violations.begin(),
                             unrepresentable.violations.end());
    report.ok = report.violations.empty();
    if (!report.ok) {
        throw ValidationError(std::move(report));
    }
    return doc;
}

std::string content_bytes(const EDoc& doc) { return xml::canonicalize(content_element(doc)); }

xml::Element to_xml(const EDoc& doc) {
    auto e = content_element(doc);
    if (!doc.doc_id.empty()) {
        e.set("id", doc.doc_id);
    }
    auto& attrs = e.add(xml::Element("attributes"));
    for (const auto& [name, value] : doc.attributes) {
        attrs.add_leaf("attribute", value).set("name", name);
    }
    auto& sigs = e.add(xml::Element("signatures"));
    for (const auto& block : doc.signatures) {
        sigs.add(crypto::to_xml(block));
    }
    return e;
}

EDoc doc_from_xml(const xml::Element& e) {
    if (e.name() != "edoc") {
        throw error(errc::malformed, "expected <edoc>");
    }
    EDoc doc;
    doc.doc_id = e.attr("id").value_or("");
    doc.type_name = e.required_attr("type");
    try {
        doc.type_version = std::stoi(e.required_attr("version"));
    } catch (const std::logic_error&) {
        throw error(errc::malformed, "non-numeric type version");
    }
    doc.created_at = parse_timestamp(e.required_attr("created"));
    for (const auto& c : e.children()) {
        if (c.name() != "fields" && c.name() != "attributes" && c.name() != "signatures") {
            throw error(errc::malformed, "unexpected <" + c.name() + "> in <edoc>");
        }
    }
    doc.field_values = named_leaves(e.required_child("fields"), "field");
    if (const auto* attrs = e.child("attributes")) {
        doc.attributes = named_leaves(*attrs, "attribute");
    }
    if (const auto* sigs = e.child("signatures")) {
        for (const auto& s : sigs->children()) {
            doc.signatures.push_back(crypto::signature_from_xml(s));
        }
    }
    if (e.children_named("fields").size() != 1 || e.children_named("attributes").size() > 1 ||
        e.children_named("signatures").size() > 1) {
        throw error(errc::malformed, "repeated <edoc> section");
    }
    return doc;
}

std::string serialize_doc(const EDoc& doc) { return xml::canonicalize(to_xml(doc)); }

EDoc parse_doc(std::string_view bytes) { return doc_from_xml(xml::parse(bytes)); }

EDoc set_attribute(EDoc doc, const std::string& name, std::string value) {
    if (!xml::valid_name(name)) {
        throw error(errc::malformed, "invalid attribute name '" + name + "'");
    }
    doc.attributes[name] = std::move(value);
    return doc;
}

std::optional<std::string> get_attribute(const EDoc& doc, const std::string& name) {
    auto it = doc.attributes.find(name);
    if (it == doc.attributes.end()) {
        return std::nullopt;
    }
    return it->second;
}

RenderedView render(const EDoc& doc, const Stylesheet& sheet) {
    if (sheet.type_name != doc.type_name) {
        throw error(errc::type_mismatch, "stylesheet " + sheet.stylesheet_id + " is for " + sheet.type_name);
    }
    RenderedView view;
    view.stylesheet_id = sheet.stylesheet_id;
    view.locale = sheet.locale;
    for (const auto& seg : parse_template(sheet.template_text)) {
        if (!seg.is_field) {
            view.text += seg.text;
            continue;
        }
        auto it = doc.field_values.find(seg.text);
        if (it == doc.field_values.end()) {
            throw error(errc::render_missing_field, seg.text);
        }
        view.text += xml::escape_text(it->second);
    }
    view.text = xml::nfc(view.text);
    view.view_digest = crypto::sha256(view.text);
    return view;
}

xml::Element to_xml(const RenderedView& view) {
    xml::Element e("view");
    e.set("stylesheet", view.stylesheet_id);
    e.set("locale", view.locale);
    e.set("digest", view.view_digest.hex());
    e.set_text(view.text);
    return e;
}

RenderedView view_from_xml(const xml::Element& e) {
    if (e.name() != "view") {
        throw error(errc::malformed, "expected <view>");
    }
    RenderedView view{e.required_attr("stylesheet"), e.required_attr("locale"), e.text(),
                      crypto::Digest::from_hex(e.required_attr("digest"))};
    return view;
}

EDoc attach_signature(EDoc doc, crypto::SignatureBlock block, const crypto::RoleCertificate& signer) {
    auto report = crypto::verify_signature(signer, content_bytes(doc), block);
    if (!report.valid) {
        throw error(errc::non_verifying_block, std::string(crypto::to_string(report.reason)));
    }
    doc.signatures.push_back(std::move(block));
    return doc;
}

DocVerification verify_doc(const EDoc& doc, const CertificateMap& certs, const StylesheetLookup& stylesheets) {
    DocVerification out;
    const auto content = content_bytes(doc);
    bool all = !doc.signatures.empty();
    for (std::size_t i = 0; i < doc.signatures.size(); ++i) {
        const auto& block = doc.signatures[i];
        SignatureCheck check{block.signer_fingerprint, false, "UNKNOWN_SIGNER"};
        if (auto it = certs.find(block.signer_fingerprint); it != certs.end()) {
            auto report = crypto::verify_signature(it->second, content, block);
            check.valid = report.valid;
            check.reason = std::string(crypto::to_string(report.reason));
        }
        all = all && check.valid;
        out.per_signature.push_back(std::move(check));

        if (!block.view) {
            continue;
        }
        ViewBindingCheck binding{i, block.view->stylesheet_id, false, "UNKNOWN_STYLESHEET"};
        if (auto sheet = stylesheets ? stylesheets(block.view->stylesheet_id) : std::nullopt) {
            try {
                auto view = render(doc, *sheet);
                binding.ok = view.view_digest == block.view->view_digest;
                binding.reason = binding.ok ? "OK" : "VIEW_MISMATCH";
            } catch (const error&) {
                binding.reason = "RENDER_FAILED";
            }
        }
        all = all && binding.ok;
        out.view_binding_checks.push_back(std::move(binding));
    }
    out.all_valid = all;
    return out;
}

xml::Element to_xml(const DocVerification& report) {
    xml::Element e("verification");
    e.set("all-valid", report.all_valid ? "true" : "false");
    for (const auto& s : report.per_signature) {
        auto& c = e.add(xml::Element("signature-check"));
        c.set("signer", s.signer.hex());
        c.set("valid", s.valid ? "true" : "false");
        c.set("reason", s.reason);
    }
    for (const auto& b : report.view_binding_checks) {
        auto& c = e.add(xml::Element("view-check"));
        c.set("signature", std::to_string(b.signature_index));
        c.set("stylesheet", b.stylesheet_id);
        c.set("ok", b.ok ? "true" : "false");
        c.set("reason", b.reason);
    }
    return e;
}

DocVerification verification_from_xml(const xml::Element& e) {
    if (e.name() != "verification") {
        throw error(errc::malformed, "expected <verification>");
    }
    DocVerification out;
    out.all_valid = e.required_attr("all-valid") == "true";
    for (const auto* c : e.children_named("signature-check")) {
        out.per_signature.push_back({crypto::Fingerprint::from_hex(c->required_attr("signer")),
                                     c->required_attr("valid") == "true", c->required_attr("reason")});
    }
    for (const auto* c : e.children_named("view-check")) {
        out.view_binding_checks.push_back({static_cast<std::size_t>(std::stoul(c->required_attr("signature"))),
                                           c->required_attr("stylesheet"), c->required_attr("ok") == "true",
                                           c->required_attr("reason")});
    }
    return out;
}

} // namespace sda::edoc
