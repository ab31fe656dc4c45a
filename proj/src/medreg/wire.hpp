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

// JSON bodies of the medreg facade. Shared by the server and its client.
#pragma once

#include "sda/edoc/edoc.hpp"
#include "sda/medreg/model.hpp"

#include <json.hpp>

namespace sda::medreg::wire {

using nlohmann::json;

inline constexpr const char* kJson = "application/json";
inline constexpr const char* kSessionDomain = "sda-medreg-session";

/// Bytes a principal signs to prove key possession for a session challenge.
inline std::string session_proof_bytes(const std::string& principal_id, const std::string& challenge) {
    return std::string(kSessionDomain) + "\n" + principal_id + "\n" + challenge;
}

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

inline std::optional<std::string> opt_string(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<std::string>();
}

inline json to_json(const Patient& p) {
    return {{"name", p.name},
            {"surname", p.surname},
            {"patient_code", p.patient_code},
            {"origin", std::string(to_string(p.origin))}};
}

inline Patient patient_from_json(const json& j) {
    return {j.at("name").get<std::string>(), j.at("surname").get<std::string>(),
            j.at("patient_code").get<std::string>(),
            parse_origin(j.value("origin", std::string("internal")))};
}

inline json to_json(const VisitRecord& v) {
    return {{"visit_id", v.visit_id},
            {"patient", to_json(v.patient)},
            {"exam_type", v.exam_type},
            {"visit_date", v.visit_date},
            {"physician_id", v.physician_id},
            {"room", opt(v.room)},
            {"status", std::string(to_string(v.status))},
            {"diagnosis", opt(v.diagnosis)},
            {"emr_doc_id", opt(v.emr_doc_id)},
            {"version", v.version}};
}

inline VisitRecord visit_from_json(const json& j) {
    VisitRecord v;
    v.visit_id = j.at("visit_id").get<std::string>();
    v.patient = patient_from_json(j.at("patient"));
    v.exam_type = j.at("exam_type").get<std::string>();
    v.visit_date = j.at("visit_date").get<std::string>();
    v.physician_id = j.at("physician_id").get<std::string>();
    v.room = opt_string(j, "room");
    v.status = parse_visit_status(j.at("status").get<std::string>());
    v.diagnosis = opt_string(j, "diagnosis");
    v.emr_doc_id = opt_string(j, "emr_doc_id");
    v.version = j.at("version").get<std::int64_t>();
    return v;
}

inline json to_json(const NewVisit& v) {
    return {{"patient", to_json(v.patient)},
            {"exam_type", v.exam_type},
            {"visit_date", v.visit_date},
            {"physician_id", v.physician_id},
            {"room", opt(v.room)}};
}

inline NewVisit new_visit_from_json(const json& j) {
    return {patient_from_json(j.at("patient")), j.at("exam_type").get<std::string>(),
            j.at("visit_date").get<std::string>(), j.at("physician_id").get<std::string>(), opt_string(j, "room")};
}

inline json to_json(const HistoryEntry& h) {
    return {{"patient_code", h.patient_code},
            {"visit_date", h.visit_date},
            {"exam_type", h.exam_type},
            {"diagnosis", h.diagnosis},
            {"emr_doc_id", opt(h.emr_doc_id)}};
}

inline HistoryEntry history_from_json(const json& j) {
    return {j.at("patient_code").get<std::string>(), j.at("visit_date").get<std::string>(),
            j.at("exam_type").get<std::string>(), j.at("diagnosis").get<std::string>(),
            opt_string(j, "emr_doc_id")};
}

inline json to_json(const Snapshot& s) {
    json visits = json::array();
    for (const auto& v : s.visits) visits.push_back(to_json(v));
    json history = json::array();
    for (const auto& h : s.history) history.push_back(to_json(h));
    return {{"physician_id", s.physician_id},
            {"visit_date", s.visit_date},
            {"snapshot_time", format_timestamp(s.taken_at)},
            {"visits", visits},
            {"history", history}};
}

inline Snapshot snapshot_from_json(const json& j) {
    Snapshot s;
    s.physician_id = j.at("physician_id").get<std::string>();
    s.visit_date = j.at("visit_date").get<std::string>();
    s.taken_at = parse_timestamp(j.at("snapshot_time").get<std::string>());
    for (const auto& v : j.at("visits")) s.visits.push_back(visit_from_json(v));
    for (const auto& h : j.at("history")) s.history.push_back(history_from_json(h));
    return s;
}

inline json to_json(const PushItem& p) {
    return {{"visit_id", p.visit_id}, {"base_version", p.base_version}, {"diagnosis", p.diagnosis}};
}

inline PushItem push_item_from_json(const json& j) {
    return {j.at("visit_id").get<std::string>(), j.at("base_version").get<std::int64_t>(),
            j.at("diagnosis").get<std::string>()};
}

inline json to_json(const PushResult& r) {
    return {{"visit_id", r.visit_id},
            {"outcome", std::string(to_string(r.outcome))},
            {"master_version", r.master_version}};
}

inline PushResult push_result_from_json(const json& j) {
    return {j.at("visit_id").get<std::string>(), parse_push_outcome(j.at("outcome").get<std::string>()),
            j.at("master_version").get<std::int64_t>()};
}

inline json to_json(const edoc::RenderedView& v) {
    return {{"stylesheet_id", v.stylesheet_id},
            {"locale", v.locale},
            {"text", v.text},
            {"view_digest", v.view_digest.hex()}};
}

inline edoc::RenderedView view_from_json(const json& j) {
    return {j.at("stylesheet_id").get<std::string>(), j.at("locale").get<std::string>(),
            j.at("text").get<std::string>(), crypto::Digest::from_hex(j.at("view_digest").get<std::string>())};
}

inline json error_body(std::string_view status, std::string_view code, const std::string& detail) {
    return {{"status", status}, {"error", code}, {"detail", detail}};
}

} // namespace sda::medreg::wire
