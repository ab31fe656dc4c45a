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

#include "sda/edoc/definition.hpp"

#include "sda/common/error.hpp"
#include "sda/common/time.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>

namespace sda::edoc {
namespace {

constexpr std::string_view kOpen = "{field:";

bool parse_int64(std::string_view text) {
    if (text.empty()) {
        return false;
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

} // namespace

std::string_view to_string(FieldKind kind) noexcept {
    switch (kind) {
    case FieldKind::string: return "string";
    case FieldKind::date: return "date";
    case FieldKind::integer: return "integer";
    case FieldKind::enumeration: return "enum";
    }
    return "string";
}

FieldKind parse_field_kind(std::string_view text) {
    if (text == "string") return FieldKind::string;
    if (text == "date") return FieldKind::date;
    if (text == "integer") return FieldKind::integer;
    if (text == "enum") return FieldKind::enumeration;
    throw error(errc::malformed, "unknown field kind '" + std::string(text) + "'");
}

bool value_conforms(const FieldSpec& spec, std::string_view value) {
    switch (spec.kind) {
    case FieldKind::string: return xml::representable(value);
    case FieldKind::date: return is_iso_date(value);
    case FieldKind::integer: return parse_int64(value);
    case FieldKind::enumeration:
        return std::find(spec.enum_values.begin(), spec.enum_values.end(), value) != spec.enum_values.end();
    }
    return false;
}

const FieldSpec* DocTypeDefinition::field(std::string_view name) const {
    for (const auto& f : fields) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

void check_definition(const DocTypeDefinition& def) {
    auto fail = [&](const std::string& what) {
        throw error(errc::validation_failed, "definition " + def.type_name + ": " + what);
    };
    if (!xml::valid_name(def.type_name)) {
        fail("invalid type name");
    }
    if (def.version < 1) {
        fail("version must be >= 1");
    }
    std::set<std::string> seen;
    for (const auto& f : def.fields) {
        if (!xml::valid_name(f.name)) {
            fail("invalid field name '" + f.name + "'");
        }
        if (!seen.insert(f.name).second) {
            fail("duplicate field '" + f.name + "'");
        }
        if (f.kind == FieldKind::enumeration && f.enum_values.empty()) {
            fail("enum field '" + f.name + "' has no values");
        }
        if (f.default_value && !value_conforms(f, *f.default_value)) {
            fail("default of '" + f.name + "' does not conform to its kind");
        }
    }
}

xml::Element to_xml(const DocTypeDefinition& def) {
    xml::Element e("doctype");
    e.set("name", def.type_name);
    e.set("version", std::to_string(def.version));
    for (const auto& f : def.fields) {
        auto& fe = e.add(xml::Element("field"));
        fe.set("name", f.name);
        fe.set("kind", std::string(to_string(f.kind)));
        fe.set("required", f.required ? "true" : "false");
        fe.set("label", f.form_label);
        if (f.default_value) {
            fe.set("default", *f.default_value);
        }
        for (const auto& v : f.enum_values) {
            fe.add_leaf("value", v);
        }
    }
    for (const auto& id : def.stylesheet_ids) {
        e.add(xml::Element("stylesheet-ref")).set("id", id);
    }
    return e;
}

DocTypeDefinition definition_from_xml(const xml::Element& e) {
    if (e.name() != "doctype") {
        throw error(errc::malformed, "expected <doctype>");
    }
    DocTypeDefinition def;
    def.type_name = e.required_attr("name");
    try {
        def.version = std::stoi(e.required_attr("version"));
    } catch (const std::logic_error&) {
        throw error(errc::malformed, "non-numeric definition version");
    }
    for (const auto& c : e.children()) {
        if (c.name() == "field") {
            FieldSpec f;
            f.name = c.required_attr("name");
            f.kind = parse_field_kind(c.required_attr("kind"));
            auto required = c.attr("required").value_or("true");
            if (required != "true" && required != "false") {
                throw error(errc::malformed, "required must be true or false");
            }
            f.required = required == "true";
            f.form_label = c.attr("label").value_or(f.name);
            f.default_value = c.attr("default");
            for (const auto* v : c.children_named("value")) {
                f.enum_values.push_back(v->text());
            }
            def.fields.push_back(std::move(f));
        } else if (c.name() == "stylesheet-ref") {
            def.stylesheet_ids.insert(c.required_attr("id"));
        } else {
            throw error(errc::malformed, "unexpected <" + c.name() + "> in <doctype>");
        }
    }
    check_definition(def);
    return def;
}

std::vector<TemplateSegment> parse_template(std::string_view text) {
    std::vector<TemplateSegment> out;
    std::string literal;
    std::size_t pos = 0;
    while (pos < text.size()) {
        if (text.substr(pos, kOpen.size()) == kOpen) {
            auto close = text.find('}', pos + kOpen.size());
            if (close == std::string_view::npos) {
                throw error(errc::bad_template, "unterminated placeholder");
            }
            auto name = text.substr(pos + kOpen.size(), close - pos - kOpen.size());
            if (!xml::valid_name(name)) {
                throw error(errc::bad_template, "invalid placeholder '" + std::string(name) + "'");
            }
            if (!literal.empty()) {
                out.push_back({false, std::move(literal)});
                literal.clear();
            }
            out.push_back({true, std::string(name)});
            pos = close + 1;
        } else {
            literal += text[pos++];
        }
    }
    if (!literal.empty()) {
        out.push_back({false, std::move(literal)});
    }
    return out;
}

void check_stylesheet(const Stylesheet& sheet, const DocTypeDefinition& def) {
    if (sheet.type_name != def.type_name) {
        throw error(errc::type_mismatch, "stylesheet " + sheet.stylesheet_id + " targets " + sheet.type_name);
    }
    for (const auto& seg : parse_template(sheet.template_text)) {
        if (seg.is_field && def.field(seg.text) == nullptr) {
            throw error(errc::bad_template, "stylesheet " + sheet.stylesheet_id + " references unknown field '" +
                                                seg.text + "'");
        }
    }
}

xml::Element to_xml(const Stylesheet& sheet) {
    xml::Element e("stylesheet");
    e.set("id", sheet.stylesheet_id);
    e.set("type", sheet.type_name);
    e.set("locale", sheet.locale);
    e.set("escaping", "xml");
    e.add_leaf("template", sheet.template_text);
    return e;
}

Stylesheet stylesheet_from_xml(const xml::Element& e) {
    if (e.name() != "stylesheet") {
        throw error(errc::malformed, "expected <stylesheet>");
    }
    if (e.attr("escaping").value_or("xml") != "xml") {
        throw error(errc::malformed, "only escaping=\"xml\" is supported");
    }
    Stylesheet sheet{e.required_attr("id"), e.required_attr("type"), e.required_attr("locale"),
                     e.required_child("template").text()};
    if (!xml::valid_name(sheet.stylesheet_id)) {
        throw error(errc::malformed, "invalid stylesheet id");
    }
    (void)parse_template(sheet.template_text);
    return sheet;
}

} // namespace sda::edoc
