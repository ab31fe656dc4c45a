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
 * @file xml.hpp
 * @brief Restricted XML element tree with a canonical byte form.
 *
 * Supported: elements, attributes, text-only leaves. Not supported:
 * namespaces, mixed content, DTDs. Canonical form is UTF-8, NFC text,
 * attributes sorted by name, no whitespace between elements, explicit
 * end tags, and a fixed escape set.
 */

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sda::xml {

class Element {
public:
    Element() = default;
    explicit Element(std::string name);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    Element& set(std::string_view key, std::string value);
    [[nodiscard]] std::optional<std::string> attr(std::string_view key) const;
    /// Throws error(malformed) naming the element and attribute.
    [[nodiscard]] const std::string& required_attr(std::string_view key) const;
    [[nodiscard]] const std::map<std::string, std::string, std::less<>>& attributes() const noexcept {
        return attributes_;
    }

    [[nodiscard]] const std::string& text() const noexcept { return text_; }
    Element& set_text(std::string text);

    /// Appends and returns a reference to the stored child.
    Element& add(Element child);
    Element& add_leaf(std::string name, std::string text);

    [[nodiscard]] const std::vector<Element>& children() const noexcept { return children_; }
    [[nodiscard]] std::vector<Element>& children() noexcept { return children_; }
    [[nodiscard]] const Element* child(std::string_view name) const;
    /// Throws error(malformed) when absent.
    [[nodiscard]] const Element& required_child(std::string_view name) const;
    [[nodiscard]] std::vector<const Element*> children_named(std::string_view name) const;

    bool operator==(const Element&) const = default;

private:
    std::string name_;
    std::map<std::string, std::string, std::less<>> attributes_;
    std::string text_;
    std::vector<Element> children_;
};

/// Parses one document. Throws error(malformed) or error(unrepresentable).
[[nodiscard]] Element parse(std::string_view bytes);

/// Canonical bytes. Throws error(unrepresentable) for invalid UTF-8 or
/// characters XML 1.0 cannot carry, error(malformed) for bad names or mixed content.
[[nodiscard]] std::string canonicalize(const Element& root);

/// Unicode NFC of a UTF-8 string. Throws error(unrepresentable) on invalid UTF-8.
[[nodiscard]] std::string nfc(std::string_view utf8);

/// True iff `utf8` is valid UTF-8 made only of XML 1.0 characters.
[[nodiscard]] bool representable(std::string_view utf8);

/// Escapes & < > " ' (and CR) the way canonical text content does.
[[nodiscard]] std::string escape_text(std::string_view text);

/// True iff name is a permitted element/attribute name: [A-Za-z_][A-Za-z0-9_.-]*
[[nodiscard]] bool valid_name(std::string_view name);

} // namespace sda::xml
