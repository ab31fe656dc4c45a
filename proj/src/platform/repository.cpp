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

#include "sda/platform/repository.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"

#include <algorithm>
#include <charconv>

namespace sda::platform {

namespace fs = std::filesystem;

namespace {

void write_element(const fs::path& path, const xml::Element& e) { write_file_atomic(path, xml::canonicalize(e)); }

std::vector<fs::path> xml_files(const fs::path& dir) {
    std::vector<fs::path> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".xml") out.push_back(entry.path());
    }
    return out;
}

std::size_t file_index(const fs::path& p) {
    auto stem = p.stem().string();
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(stem.data(), stem.data() + stem.size(), n);
    if (ec != std::errc{} || ptr != stem.data() + stem.size()) {
        throw error(errc::startup, "unexpected file " + p.string());
    }
    return n;
}

std::string describe(const edoc::DocVerification& v) {
    std::string out;
    for (std::size_t i = 0; i < v.per_signature.size(); ++i) {
        if (!v.per_signature[i].valid) out += "signature " + std::to_string(i) + ": " + v.per_signature[i].reason + "; ";
    }
    for (const auto& c : v.view_binding_checks) {
        if (!c.ok) out += "view " + c.stylesheet_id + ": " + c.reason + "; ";
    }
    return out.empty() ? "no signatures" : out;
}

} // namespace

std::optional<std::size_t> parse_doc_id(std::string_view id) {
    if (id.size() < 2 || id[0] != 'd' || id[1] == '0') return std::nullopt;
    std::size_t n = 0;
    auto [ptr, ec] = std::from_chars(id.data() + 1, id.data() + id.size(), n);
    if (ec != std::errc{} || ptr != id.data() + id.size()) return std::nullopt;
    return n;
}

Repository Repository::open(const fs::path& data_dir, std::map<std::string, std::string> static_attributes) {
    Repository r;
    r.dir_ = data_dir;
    r.static_attributes_ = std::move(static_attributes);
    try {
        for (const auto* sub : {"defs", "sheets", "docs", "certs"}) {
            fs::create_directories(data_dir / sub);
        }
        write_file_atomic(data_dir / ".write-probe", "ok");
        fs::remove(data_dir / ".write-probe");
    } catch (const std::exception& e) {
        throw error(errc::startup, "data dir " + data_dir.string() + " not writable: " + e.what());
    }

    auto load = [](const fs::path& p) {
        try {
            return xml::parse(read_file(p));
        } catch (const error& e) {
            throw error(errc::startup, "corrupt " + p.string() + ": " + e.what());
        }
    };

    try {
        auto defs = xml_files(data_dir / "defs");
        std::sort(defs.begin(), defs.end(), [](const auto& a, const auto& b) { return file_index(a) < file_index(b); });
        for (const auto& p : defs) {
            auto def = edoc::definition_from_xml(load(p));
            r.definitions_.emplace(std::pair{def.type_name, def.version}, std::move(def));
        }
        for (const auto& p : xml_files(data_dir / "sheets")) {
            auto sheet = edoc::stylesheet_from_xml(load(p));
            r.stylesheets_.emplace(sheet.stylesheet_id, std::move(sheet));
        }
        for (const auto& p : xml_files(data_dir / "certs")) {
            auto cert = crypto::certificate_from_xml(load(p));
            r.certs_.emplace(crypto::fingerprint(cert), std::move(cert));
        }
        if (fs::exists(data_dir / "roles.xml")) {
            auto roles = load(data_dir / "roles.xml");
            for (const auto* g : roles.children_named("role")) {
                r.grants_.push_back(proto::role_grant_from_xml(*g));
            }
        }
    } catch (const error& e) {
        if (e.code() == errc::startup) throw;
        throw error(errc::startup, std::string("corrupt repository: ") + e.what());
    }

    for (const auto& p : xml_files(data_dir / "docs")) {
        auto name = p.stem().string();
        auto n = parse_doc_id(name);
        if (!n) throw error(errc::startup, "unexpected file " + p.string());
        edoc::EDoc doc;
        try {
            doc = edoc::parse_doc(read_file(p));
        } catch (const error& e) {
            throw error(errc::startup, "corrupt doc " + name + ": " + e.what());
        }
        if (doc.doc_id != name) throw error(errc::startup, "corrupt doc " + name + ": id says " + doc.doc_id);
        r.docs_.emplace(*n, std::move(doc));
    }
    std::size_t expect = 1;
    for (const auto& [n, doc] : r.docs_) {
        if (n != expect) throw error(errc::startup, "missing doc d" + std::to_string(expect));
        ++expect;
    }
    for (const auto& [n, doc] : r.docs_) {
        const auto* def = r.definition(doc.type_name, doc.type_version);
        if (!def) throw error(errc::startup, "corrupt doc " + doc.doc_id + ": unknown type " + doc.type_name);
        if (!edoc::validate_doc(*def, doc).ok) throw error(errc::startup, "corrupt doc " + doc.doc_id + ": invalid fields");
        auto v = r.verify(doc);
        if (!v.all_valid) throw error(errc::startup, "corrupt doc " + doc.doc_id + ": " + describe(v));
    }
    return r;
}

const edoc::DocTypeDefinition* Repository::definition(const std::string& type, int version) const {
    auto it = definitions_.find({type, version});
    return it == definitions_.end() ? nullptr : &it->second;
}

const edoc::DocTypeDefinition* Repository::latest(const std::string& type) const {
    const edoc::DocTypeDefinition* best = nullptr;
    for (auto it = definitions_.lower_bound({type, std::numeric_limits<int>::min()});
         it != definitions_.end() && it->first.first == type; ++it) {
        best = &it->second;
    }
    return best;
}

std::optional<edoc::Stylesheet> Repository::stylesheet(const std::string& id) const {
    auto it = stylesheets_.find(id);
    if (it == stylesheets_.end()) return std::nullopt;
    return it->second;
}

std::optional<edoc::Stylesheet> Repository::stylesheet_for(const std::string& type, const std::string& locale) const {
    for (const auto& [id, s] : stylesheets_) {
        if (s.type_name == type && s.locale == locale) return s;
    }
    return std::nullopt;
}

proto::TypeCatalog Repository::catalog() const {
    proto::TypeCatalog c;
    for (const auto& [key, def] : definitions_) {
        c.definitions.push_back(def);
    }
    for (const auto& [id, s] : stylesheets_) {
        c.stylesheets.push_back(s);
    }
    return c;
}

void Repository::install_definition(const edoc::DocTypeDefinition& def) {
    edoc::check_definition(def);
    if (definition(def.type_name, def.version)) {
        throw error(errc::duplicate_definition, def.type_name + " v" + std::to_string(def.version));
    }
    write_element(dir_ / "defs" / (std::to_string(definitions_.size() + 1) + ".xml"), edoc::to_xml(def));
    definitions_.emplace(std::pair{def.type_name, def.version}, def);
}

void Repository::install_stylesheet(const edoc::Stylesheet& sheet) {
    if (!xml::valid_name(sheet.stylesheet_id)) throw error(errc::malformed, "bad stylesheet id " + sheet.stylesheet_id);
    const auto* def = latest(sheet.type_name);
    if (!def) throw error(errc::unknown_type, sheet.type_name);
    if (stylesheets_.contains(sheet.stylesheet_id)) throw error(errc::duplicate_stylesheet, sheet.stylesheet_id);
    edoc::check_stylesheet(sheet, *def);
    write_element(dir_ / "sheets" / (std::to_string(stylesheets_.size() + 1) + ".xml"), edoc::to_xml(sheet));
    stylesheets_.emplace(sheet.stylesheet_id, sheet);
}

const edoc::EDoc* Repository::doc(const std::string& doc_id) const {
    auto n = parse_doc_id(doc_id);
    if (!n) return nullptr;
    auto it = docs_.find(*n);
    return it == docs_.end() ? nullptr : &it->second;
}

std::vector<const edoc::EDoc*> Repository::docs() const {
    std::vector<const edoc::EDoc*> out;
    out.reserve(docs_.size());
    for (const auto& [n, d] : docs_) {
        out.push_back(&d);
    }
    return out;
}

edoc::StylesheetLookup Repository::lookup() const {
    return [this](const std::string& id) { return stylesheet(id); };
}

edoc::DocVerification Repository::verify(const edoc::EDoc& doc) const { return edoc::verify_doc(doc, certs_, lookup()); }

std::string Repository::store(edoc::EDoc doc) {
    const auto* def = definition(doc.type_name, doc.type_version);
    if (!def) throw error(errc::unknown_type, doc.type_name + " v" + std::to_string(doc.type_version));
    auto report = edoc::validate_doc(*def, doc);
    if (!report.ok) throw edoc::ValidationError(report);
    if (doc.signatures.empty()) throw error(errc::unsigned_doc, "no signature blocks");
    auto v = verify(doc);
    if (!v.all_valid) throw error(errc::invalid_signature, describe(v));
    for (const auto& [name, value] : static_attributes_) {
        doc.attributes.try_emplace(name, value);
    }
    auto n = docs_.size() + 1;
    doc.doc_id = "d" + std::to_string(n);
    write_file_atomic(doc_path(doc.doc_id), edoc::serialize_doc(doc));
    auto id = doc.doc_id;
    docs_.emplace(n, std::move(doc));
    return id;
}

void Repository::set_attribute(const std::string& doc_id, const std::string& name, std::string value) {
    auto n = parse_doc_id(doc_id);
    auto it = n ? docs_.find(*n) : docs_.end();
    if (it == docs_.end()) throw error(errc::unknown_doc, doc_id);
    if (static_attributes_.contains(name)) throw error(errc::immutable_attribute, name);
    if (!xml::valid_name(name)) throw error(errc::malformed, "bad attribute name " + name);
    auto updated = edoc::set_attribute(it->second, name, xml::nfc(value));
    write_file_atomic(doc_path(doc_id), edoc::serialize_doc(updated));
    it->second = std::move(updated);
}

std::vector<std::string> Repository::audit() const {
    std::vector<std::string> bad;
    for (const auto& [n, d] : docs_) {
        if (!verify(d).all_valid) bad.push_back(d.doc_id);
    }
    return bad;
}

void Repository::remember_certificate(const crypto::RoleCertificate& cert) {
    auto fp = crypto::fingerprint(cert);
    if (certs_.contains(fp)) return;
    crypto::save_certificate(dir_ / "certs" / (fp.hex() + ".xml"), cert);
    certs_.emplace(fp, cert);
}

void Repository::save_role_grants(std::vector<proto::RoleGrant> grants) {
    xml::Element root{"roles"};
    for (const auto& g : grants) {
        root.add(proto::to_xml(g));
    }
    write_element(dir_ / "roles.xml", root);
    grants_ = std::move(grants);
}

fs::path Repository::doc_path(const std::string& doc_id) const { return dir_ / "docs" / (doc_id + ".xml"); }

} // namespace sda::platform
