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

#include "sda/medreg/facade.hpp"

#include "wire.hpp"

#include <httplib.h>

namespace sda::medreg {

using wire::json;

FacadeError::FacadeError(int http_status, std::string status, errc code, std::string code_text,
                         const std::string& detail)
    : error(code, detail), http_status_(http_status), verbatim_(std::move(status) + "/" + std::move(code_text)) {}

struct FacadeClient::Reply {
    int status;
    json body;
};

FacadeClient::FacadeClient(std::string base_url, bool offline) : base_url_(std::move(base_url)), offline_(offline) {
    while (!base_url_.empty() && base_url_.back() == '/') base_url_.pop_back();
}

std::pair<int, std::string> FacadeClient::raw(const std::string& method, const std::string& path,
                                              const std::string& body) {
    if (offline_) throw error(errc::offline, "transport disabled");
    httplib::Client http(base_url_);
    http.set_connection_timeout(5);
    http.set_read_timeout(60);
    httplib::Headers headers;
    if (!token_.empty()) headers.emplace("Authorization", "Bearer " + token_);
    auto res = method == "GET" ? http.Get(path, headers) : http.Post(path, headers, body, wire::kJson);
    if (!res) throw error(errc::offline, base_url_ + ": " + httplib::to_string(res.error()));
    return {res->status, res->body};
}

FacadeClient::Reply FacadeClient::send(const std::string& method, const std::string& path, const std::string& body,
                                       bool allow_409) {
    auto [status, text] = raw(method, path, body);
    auto j = json::parse(text, nullptr, false);
    if (j.is_discarded()) {
        throw FacadeError(status, "ERROR", errc::malformed, "MALFORMED", "non-JSON reply: " + text.substr(0, 200));
    }
    if (status / 100 == 2 || (allow_409 && status == 409)) return {status, std::move(j)};
    auto code_text = j.value("error", std::string("INTERNAL"));
    auto code = parse_errc(code_text).value_or(errc::internal);
    throw FacadeError(status, j.value("status", std::string("ERROR")), code, code_text,
                      j.value("detail", std::string()));
}

void FacadeClient::login(const std::string& principal_id, const crypto::KeystoreSession& key, Timestamp now) {
    token_.clear();
    auto challenge = send("POST", "/session", json{{"principal", principal_id}}.dump()).body.at("challenge");
    auto block = key.sign_block(wire::session_proof_bytes(principal_id, challenge.get<std::string>()), std::nullopt,
                                now);
    auto proof = xml::canonicalize(crypto::to_xml(block));
    auto reply = send("POST", "/session",
                      json{{"principal", principal_id}, {"challenge", challenge}, {"proof", proof}}.dump());
    token_ = reply.body.at("token").get<std::string>();
}

std::string FacadeClient::register_visit(const NewVisit& visit) {
    return send("POST", "/visits", wire::to_json(visit).dump()).body.at("visit_id").get<std::string>();
}

Snapshot FacadeClient::worklist(const std::string& date) {
    return wire::snapshot_from_json(send("GET", "/worklist?date=" + date, {}).body);
}

SyncReply FacadeClient::sync(const std::vector<PushItem>& items) {
    json list = json::array();
    for (const auto& i : items) list.push_back(wire::to_json(i));
    auto reply = send("POST", "/sync", json{{"items", list}}.dump(), true);
    SyncReply out{reply.status, {}};
    for (const auto& r : reply.body.at("results")) out.results.push_back(wire::push_result_from_json(r));
    return out;
}

GeneratedEmr FacadeClient::generate_emr(const std::string& visit_id) {
    auto body = send("POST", "/emr/generate", json{{"visit_id", visit_id}}.dump()).body;
    return {body.at("visit_id").get<std::string>(), edoc::parse_doc(body.at("edoc").get<std::string>()),
            wire::view_from_json(body.at("view"))};
}

StoredEmr FacadeClient::store_emr(const edoc::EDoc& signed_doc) {
    auto body = send("POST", "/emr/store", json{{"edoc", edoc::serialize_doc(signed_doc)}}.dump()).body;
    return {body.at("visit_id").get<std::string>(), body.at("doc_id").get<std::string>(),
            body.at("already_stored").get<bool>()};
}

PrintedEmr FacadeClient::print_emr(const std::string& doc_id) {
    auto body = send("GET", "/emr/" + doc_id + "/print", {}).body;
    return {body.at("doc_id").get<std::string>(), wire::view_from_json(body)};
}

std::vector<HistoryEntry> FacadeClient::history(const std::string& patient_code) {
    auto reply = send("GET", "/history/" + patient_code, {});
    std::vector<HistoryEntry> out;
    for (const auto& h : reply.body.at("history")) {
        out.push_back(wire::history_from_json(h));
    }
    return out;
}

} // namespace sda::medreg
