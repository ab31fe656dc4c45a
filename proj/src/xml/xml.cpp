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

#include "sda/xml/xml.hpp"

#include "sda/common/error.hpp"

#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

#include <cstdint>

namespace sda::xml {
namespace {

constexpr int kMaxDepth = 128;

[[noreturn]] void malformed(const std::string& what) { throw error(errc::malformed, what); }

// Decodes one code point; returns 0 bytes consumed on invalid input.
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t& cp) {
    auto b0 = static_cast<unsigned char>(s[i]);
    if (b0 < 0x80) {
        cp = b0;
        return 1;
    }
    std::size_t len = 0;
    char32_t min = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
        min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
        min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
        min = 0x10000;
    } else {
        return 0;
    }
    if (i + len > s.size()) {
        return 0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        auto b = static_cast<unsigned char>(s[i + k]);
        if ((b & 0xC0) != 0x80) {
            return 0;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        return 0;
    }
    return len;
}

bool xml_char(char32_t cp) {
    return cp == 0x9 || cp == 0xA || cp == 0xD || (cp >= 0x20 && cp <= 0xD7FF) ||
           (cp >= 0xE000 && cp <= 0xFFFD) || (cp >= 0x10000 && cp <= 0x10FFFF);
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool ascii_only(std::string_view s) {
    for (char c : s) {
        if (static_cast<unsigned char>(c) >= 0x80) {
            return false;
        }
    }
    return true;
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

std::string escape_attr(std::string_view value) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        case '\t': out += "&#x9;"; break;
        case '\n': out += "&#xA;"; break;
        case '\r': out += "&#xD;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string checked_nfc(std::string_view s, std::string_view where) {
    if (!representable(s)) {
        throw error(errc::unrepresentable, "in " + std::string(where));
    }
    return nfc(s);
}

void write_canonical(const Element& e, std::string& out, int depth) {
    if (depth > kMaxDepth) {
        malformed("nesting too deep");
    }
    if (!valid_name(e.name())) {
        malformed("bad element name '" + e.name() + "'");
    }
    if (!e.children().empty() && !e.text().empty()) {
        malformed("mixed content in <" + e.name() + ">");
    }
    out += '<';
    out += e.name();
    for (const auto& [key, value] : e.attributes()) {
        if (!valid_name(key)) {
            malformed("bad attribute name '" + key + "'");
        }
        out += ' ';
        out += key;
        out += "=\"";
        out += escape_attr(checked_nfc(value, e.name() + "@" + key));
        out += '"';
    }
    out += '>';
    if (!e.text().empty()) {
        out += escape_text(checked_nfc(e.text(), e.name()));
    }
    for (const auto& c : e.children()) {
        write_canonical(c, out, depth + 1);
    }
    out += "</";
    out += e.name();
    out += '>';
}

class Parser {
public:
    explicit Parser(std::string_view in) : in_(in) {}

    Element document() {
        skip_misc(true);
        if (at_end() || peek() != '<') {
            malformed("no root element");
        }
        Element root = element(0);
        skip_misc(false);
        if (!at_end()) {
            malformed("trailing content after root element");
        }
        return root;
    }

private:
    bool at_end() const { return pos_ >= in_.size(); }
    char peek() const { return in_[pos_]; }
    bool starts_with(std::string_view s) const { return in_.substr(pos_, s.size()) == s; }

    void expect(std::string_view s) {
        if (!starts_with(s)) {
            malformed("expected '" + std::string(s) + "' at offset " + std::to_string(pos_));
        }
        pos_ += s.size();
    }

    void skip_space() {
        while (!at_end() && is_space(peek())) {
            ++pos_;
        }
    }

    void skip_until(std::string_view terminator) {
        auto end = in_.find(terminator, pos_);
        if (end == std::string_view::npos) {
            malformed("unterminated construct");
        }
        pos_ = end + terminator.size();
    }

    // Prolog / epilog: whitespace, comments, processing instructions.
    void skip_misc(bool prolog) {
        for (;;) {
            skip_space();
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (prolog && starts_with("<!DOCTYPE")) {
                malformed("DTDs are not supported");
            } else {
                return;
            }
        }
    }

    std::string name() {
        std::size_t start = pos_;
        while (!at_end()) {
            char c = peek();
            bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
                      (pos_ > start && ((c >= '0' && c <= '9') || c == '-' || c == '.'));
            if (!ok) {
                break;
            }
            ++pos_;
        }
        if (pos_ == start) {
            malformed("expected a name at offset " + std::to_string(pos_));
        }
        return std::string(in_.substr(start, pos_ - start));
    }

    void reference(std::string& out) {
        auto end = in_.find(';', pos_);
        if (end == std::string_view::npos || end - pos_ > 12) {
            malformed("bad entity reference");
        }
        auto ref = in_.substr(pos_ + 1, end - pos_ - 1);
        pos_ = end + 1;
        if (ref == "amp") {
            out += '&';
        } else if (ref == "lt") {
            out += '<';
        } else if (ref == "gt") {
            out += '>';
        } else if (ref == "quot") {
            out += '"';
        } else if (ref == "apos") {
            out += '\'';
        } else if (!ref.empty() && ref[0] == '#') {
            char32_t cp = 0;
            bool hex = ref.size() > 1 && ref[1] == 'x';
            auto digits = ref.substr(hex ? 2 : 1);
            if (digits.empty()) {
                malformed("empty character reference");
            }
            for (char c : digits) {
                int v = -1;
                if (c >= '0' && c <= '9') {
                    v = c - '0';
                } else if (hex && c >= 'a' && c <= 'f') {
                    v = c - 'a' + 10;
                } else if (hex && c >= 'A' && c <= 'F') {
                    v = c - 'A' + 10;
                }
                if (v < 0) {
                    malformed("bad character reference");
                }
                cp = cp * (hex ? 16 : 10) + static_cast<char32_t>(v);
                if (cp > 0x10FFFF) {
                    malformed("character reference out of range");
                }
            }
            if (!xml_char(cp)) {
                throw error(errc::unrepresentable, "character reference to a non-XML character");
            }
            append_utf8(out, cp);
        } else {
            malformed("unknown entity '" + std::string(ref) + "'");
        }
    }

    std::string attribute_value() {
        if (at_end() || (peek() != '"' && peek() != '\'')) {
            malformed("expected quoted attribute value");
        }
        char quote = in_[pos_++];
        std::string out;
        while (!at_end() && peek() != quote) {
            char c = peek();
            if (c == '<') {
                malformed("'<' in attribute value");
            }
            if (c == '&') {
                reference(out);
            } else {
                out += c;
                ++pos_;
            }
        }
        if (at_end()) {
            malformed("unterminated attribute value");
        }
        ++pos_;
        return out;
    }

    Element element(int depth) {
        if (depth > kMaxDepth) {
            malformed("nesting too deep");
        }
        expect("<");
        Element e(name());
        for (;;) {
            std::size_t before = pos_;
            skip_space();
            if (at_end()) {
                malformed("unterminated start tag <" + e.name() + ">");
            }
            if (starts_with("/>")) {
                pos_ += 2;
                return e;
            }
            if (peek() == '>') {
                ++pos_;
                break;
            }
            if (pos_ == before) {
                malformed("expected whitespace before attribute in <" + e.name() + ">");
            }
            auto key = name();
            skip_space();
            expect("=");
            skip_space();
            auto value = attribute_value();
            if (e.attr(key)) {
                malformed("duplicate attribute '" + key + "'");
            }
            e.set(key, std::move(value));
        }

        std::string text;
        bool significant_text = false;
        for (;;) {
            if (at_end()) {
                malformed("missing end tag for <" + e.name() + ">");
            }
            if (starts_with("</")) {
                pos_ += 2;
                auto closing = name();
                if (closing != e.name()) {
                    malformed("end tag </" + closing + "> does not match <" + e.name() + ">");
                }
                skip_space();
                expect(">");
                break;
            }
            if (starts_with("<!--")) {
                skip_until("-->");
            } else if (starts_with("<![CDATA[")) {
                pos_ += 9;
                auto end = in_.find("]]>", pos_);
                if (end == std::string_view::npos) {
                    malformed("unterminated CDATA");
                }
                text.append(in_.substr(pos_, end - pos_));
                significant_text = true;
                pos_ = end + 3;
            } else if (starts_with("<?")) {
                skip_until("?>");
            } else if (peek() == '<') {
                e.add(element(depth + 1));
            } else if (peek() == '&') {
                reference(text);
                significant_text = true;
            } else {
                char c = in_[pos_++];
                if (!is_space(c)) {
                    significant_text = true;
                }
                text += c;
            }
        }
        if (!e.children().empty()) {
            if (significant_text) {
                malformed("mixed content in <" + e.name() + ">");
            }
        } else {
            if (!representable(text)) {
                throw error(errc::unrepresentable, "in <" + e.name() + ">");
            }
            e.set_text(std::move(text));
        }
        return e;
    }

    std::string_view in_;
    std::size_t pos_ = 0;
};

} // namespace

Element::Element(std::string name) : name_(std::move(name)) {}

Element& Element::set(std::string_view key, std::string value) {
    auto it = attributes_.find(key);
    if (it == attributes_.end()) {
        attributes_.emplace(std::string(key), std::move(value));
    } else {
        it->second = std::move(value);
    }
    return *this;
}

std::optional<std::string> Element::attr(std::string_view key) const {
    auto it = attributes_.find(key);
    if (it == attributes_.end()) {
        return std::nullopt;
    }
    return it->second;
}

const std::string& Element::required_attr(std::string_view key) const {
    auto it = attributes_.find(key);
    if (it == attributes_.end()) {
        malformed("<" + name_ + "> lacks attribute '" + std::string(key) + "'");
    }
    return it->second;
}

Element& Element::set_text(std::string text) {
    text_ = std::move(text);
    return *this;
}

Element& Element::add(Element child) {
    children_.push_back(std::move(child));
    return children_.back();
}

Element& Element::add_leaf(std::string name, std::string text) {
    Element leaf(std::move(name));
    leaf.set_text(std::move(text));
    return add(std::move(leaf));
}

const Element* Element::child(std::string_view name) const {
    for (const auto& c : children_) {
        if (c.name() == name) {
            return &c;
        }
    }
    return nullptr;
}

const Element& Element::required_child(std::string_view name) const {
    const Element* c = child(name);
    if (c == nullptr) {
        malformed("<" + name_ + "> lacks child <" + std::string(name) + ">");
    }
    return *c;
}

std::vector<const Element*> Element::children_named(std::string_view name) const {
    std::vector<const Element*> out;
    for (const auto& c : children_) {
        if (c.name() == name) {
            out.push_back(&c);
        }
    }
    return out;
}

Element parse(std::string_view bytes) { return Parser(bytes).document(); }

std::string canonicalize(const Element& root) {
    std::string out;
    write_canonical(root, out, 0);
    return out;
}

bool representable(std::string_view utf8) {
    for (std::size_t i = 0; i < utf8.size();) {
        char32_t cp = 0;
        std::size_t n = decode_utf8(utf8, i, cp);
        if (n == 0 || !xml_char(cp)) {
            return false;
        }
        i += n;
    }
    return true;
}

std::string nfc(std::string_view utf8) {
    if (ascii_only(utf8)) {
        return std::string(utf8);
    }
    for (std::size_t i = 0; i < utf8.size();) {
        char32_t cp = 0;
        std::size_t n = decode_utf8(utf8, i, cp);
        if (n == 0) {
            throw error(errc::unrepresentable, "invalid UTF-8");
        }
        i += n;
    }
    UErrorCode status = U_ZERO_ERROR;
    const icu::Normalizer2* normalizer = icu::Normalizer2::getNFCInstance(status);
    if (U_FAILURE(status)) {
        throw error(errc::internal, "ICU NFC normalizer unavailable");
    }
    auto source = icu::UnicodeString::fromUTF8(icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
    if (normalizer->isNormalized(source, status) && U_SUCCESS(status)) {
        return std::string(utf8);
    }
    status = U_ZERO_ERROR;
    icu::UnicodeString normalized = normalizer->normalize(source, status);
    if (U_FAILURE(status)) {
        throw error(errc::unrepresentable, "NFC normalization failed");
    }
    std::string out;
    normalized.toUTF8String(out);
    return out;
}

std::string escape_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        case '\r': out += "&#xD;"; break;
        default: out += c;
        }
    }
    return out;
}

bool valid_name(std::string_view name) {
    if (name.empty()) {
        return false;
    }
    for (std::size_t i = 0; i < name.size(); ++i) {
        char c = name[i];
        bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
                  (i > 0 && ((c >= '0' && c <= '9') || c == '-' || c == '.'));
        if (!ok) {
            return false;
        }
    }
    return true;
}

} // namespace sda::xml
