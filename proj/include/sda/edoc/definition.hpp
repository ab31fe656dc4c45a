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

/**
 * @file definition.hpp
 * @brief Document type definitions (typed field schemas) and stylesheets.
 */

#pragma once

#include "sda/xml/xml.hpp"

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace sda::edoc {

enum class FieldKind { string, date, integer, enumeration };

[[nodiscard]] std::string_view to_string(FieldKind kind) noexcept;
/// Throws error(malformed).
[[nodiscard]] FieldKind parse_field_kind(std::string_view text);

struct FieldSpec {
    std::string name;
    FieldKind kind = FieldKind::string;
    std::vector<std::string> enum_values;
    bool required = true;
    std::optional<std::string> default_value;
    std::string form_label;

    bool operator==(const FieldSpec&) const = default;
};

/// Does `value` conform to the field's kind?
[[nodiscard]] bool value_conforms(const FieldSpec& spec, std::string_view value);

struct DocTypeDefinition {
    std::string type_name;
    int version = 1;
    std::vector<FieldSpec> fields;
    std::set<std::string> stylesheet_ids;

    [[nodiscard]] const FieldSpec* field(std::string_view name) const;

    bool operator==(const DocTypeDefinition&) const = default;
};

/// Structural checks: version >= 1, unique valid field names, non-empty enums,
/// defaults that conform. Throws error(validation_failed).
void check_definition(const DocTypeDefinition& def);

[[nodiscard]] xml::Element to_xml(const DocTypeDefinition& def);
/// Parses and runs check_definition. Throws error(malformed) / error(validation_failed).
[[nodiscard]] DocTypeDefinition definition_from_xml(const xml::Element& e);

/// Restricted template: literal text plus `{field:NAME}` placeholders.
struct Stylesheet {
    std::string stylesheet_id;
    std::string type_name;
    std::string locale;
    std::string template_text;

    bool operator==(const Stylesheet&) const = default;
};

struct TemplateSegment {
    bool is_field = false;
    std::string text;  ///< literal text, or the field name when is_field
};

/// Throws error(bad_template) on an unterminated or empty placeholder.
[[nodiscard]] std::vector<TemplateSegment> parse_template(std::string_view text);

/// Every placeholder must name a field of `def`. Throws error(bad_template) / error(type_mismatch).
void check_stylesheet(const Stylesheet& sheet, const DocTypeDefinition& def);

[[nodiscard]] xml::Element to_xml(const Stylesheet& sheet);
/// Throws error(malformed) / error(bad_template).
[[nodiscard]] Stylesheet stylesheet_from_xml(const xml::Element& e);

} // namespace sda::edoc
