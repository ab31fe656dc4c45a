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

#include "sda/medreg/model.hpp"

#include <array>
#include <utility>

namespace sda::medreg {

namespace {

template <typename Enum, std::size_t N>
Enum parse_enum(const std::array<std::pair<Enum, std::string_view>, N>& table, std::string_view text,
                const char* what) {
    for (const auto& [value, name] : table) {
        if (name == text) return value;
    }
    throw error(errc::malformed, std::string("unknown ") + what + " '" + std::string(text) + "'");
}

template <typename Enum, std::size_t N>
std::string_view name_of(const std::array<std::pair<Enum, std::string_view>, N>& table, Enum value) noexcept {
    for (const auto& [v, name] : table) {
        if (v == value) return name;
    }
    return "?";
}

constexpr std::array<std::pair<VisitStatus, std::string_view>, 3> kStatuses{{
    {VisitStatus::reserved, "reserved"},
    {VisitStatus::diagnosed, "diagnosed"},
    {VisitStatus::processed, "processed"},
}};
constexpr std::array<std::pair<Origin, std::string_view>, 2> kOrigins{{
    {Origin::internal, "internal"},
    {Origin::external, "external"},
}};
constexpr std::array<std::pair<PrincipalRole, std::string_view>, 3> kRoles{{
    {PrincipalRole::physician, "physician"},
    {PrincipalRole::registrar, "registrar"},
    {PrincipalRole::admin, "admin"},
}};
constexpr std::array<std::pair<PushOutcome, std::string_view>, 3> kOutcomes{{
    {PushOutcome::ok, "OK"},
    {PushOutcome::stale_version, "STALE_VERSION"},
    {PushOutcome::not_lease_holder, "NOT_LEASE_HOLDER"},
}};

std::optional<std::string> opt_leaf(const xml::Element& e, std::string_view name) {
    if (const auto* c = e.child(name)) return c->text();
    return std::nullopt;
}

std::int64_t parse_int(const std::string& text) {
    try {
        std::size_t used = 0;
        auto v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw error(errc::malformed, "bad integer '" + text + "'");
    }
}

} // namespace

std::string_view to_string(VisitStatus s) noexcept { return name_of(kStatuses, s); }
std::string_view to_string(Origin o) noexcept { return name_of(kOrigins, o); }
std::string_view to_string(PrincipalRole r) noexcept { return name_of(kRoles, r); }
std::string_view to_string(PushOutcome o) noexcept { return name_of(kOutcomes, o); }

VisitStatus parse_visit_status(std::string_view text) { return parse_enum(kStatuses, text, "visit status"); }
Origin parse_origin(std::string_view text) { return parse_enum(kOrigins, text, "origin"); }
PrincipalRole parse_principal_role(std::string_view text) { return parse_enum(kRoles, text, "role"); }
PushOutcome parse_push_outcome(std::string_view text) { return parse_enum(kOutcomes, text, "push outcome"); }

void require_date(std::string_view date) {
    if (!is_iso_date(date)) throw error(errc::bad_date, "'" + std::string(date) + "' is not a YYYY-MM-DD day");
}

xml::Element to_xml(const VisitRecord& v) {
    xml::Element e{"visit"};
    e.set("id", v.visit_id);
    e.set("version", std::to_string(v.version));
    e.set("status", std::string(to_string(v.status)));
    auto& p = e.add(xml::Element{"patient"});
    p.set("name", v.patient.name);
    p.set("surname", v.patient.surname);
    p.set("code", v.patient.patient_code);
    p.set("origin", std::string(to_string(v.patient.origin)));
    e.add_leaf("exam-type", v.exam_type);
    e.add_leaf("visit-date", v.visit_date);
    e.add_leaf("physician", v.physician_id);
    if (v.room) e.add_leaf("room", *v.room);
    if (v.diagnosis) e.add_leaf("diagnosis", *v.diagnosis);
    if (v.emr_doc_id) e.add_leaf("emr-doc-id", *v.emr_doc_id);
    return e;
}

VisitRecord visit_from_xml(const xml::Element& e) {
    if (e.name() != "visit") throw error(errc::malformed, "expected <visit>");
    VisitRecord v;
    v.visit_id = e.required_attr("id");
    v.version = parse_int(e.required_attr("version"));
    v.status = parse_visit_status(e.required_attr("status"));
    const auto& p = e.required_child("patient");
    v.patient = {p.required_attr("name"), p.required_attr("surname"), p.required_attr("code"),
                 parse_origin(p.required_attr("origin"))};
    v.exam_type = e.required_child("exam-type").text();
    v.visit_date = e.required_child("visit-date").text();
    v.physician_id = e.required_child("physician").text();
    v.room = opt_leaf(e, "room");
    v.diagnosis = opt_leaf(e, "diagnosis");
    v.emr_doc_id = opt_leaf(e, "emr-doc-id");
    return v;
}

xml::Element to_xml(const HistoryEntry& h) {
    xml::Element e{"exam"};
    e.set("patient-code", h.patient_code);
    e.set("date", h.visit_date);
    e.set("type", h.exam_type);
    if (h.emr_doc_id) e.set("doc-id", *h.emr_doc_id);
    e.set_text(h.diagnosis);
    return e;
}

HistoryEntry history_from_xml(const xml::Element& e) {
    if (e.name() != "exam") throw error(errc::malformed, "expected <exam>");
    return {e.required_attr("patient-code"), e.required_attr("date"), e.required_attr("type"), e.text(),
            e.attr("doc-id")};
}

} // namespace sda::medreg
