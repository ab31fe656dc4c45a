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

#include "criteria.hpp"

#include "platform_harness.hpp"

#include "sda/client/client.hpp"

#include <chrono>
#include <sstream>

namespace sda::acceptance {

using namespace sda::testing;
using K = proto::CommandKind;

namespace {

std::string percent(std::size_t ok, std::size_t total) {
    return std::to_string(ok) + "/" + std::to_string(total);
}

/// Kinds whose body names one document type (directly or through a stored doc).
/// The matrix searches with a type filter, so SEARCH_DOCS counts.
bool type_scoped(K kind) {
    switch (kind) {
    case K::search_docs:
    case K::install_definition:
    case K::install_stylesheet:
    case K::create_doc:
    case K::store_doc:
    case K::get_doc:
    case K::render_doc:
    case K::verify_doc:
    case K::set_attribute:
    case K::get_attribute:
        return true;
    default:
        return false;
    }
}

bool admin_kind(K kind) {
    return kind == K::install_role || kind == K::revoke_role || kind == K::start_port || kind == K::stop_port;
}

struct Grant {
    std::set<K> kinds;
    std::optional<std::set<std::string>> types;
};

/// The role table restated on its own, the way an operator would write it down.
bool oracle_allows(const Grant& g, K kind, const std::string& type) {
    if (!g.kinds.contains(kind)) return false;
    if (!type_scoped(kind) || !g.types) return true;
    return g.types->contains(type);
}

bool authorization_denial(const proto::ResponseEnvelope& r) {
    return r.status == proto::Status::denied &&
           (r.error_code == "COMMAND_NOT_ALLOWED" || r.error_code == "TYPE_NOT_ALLOWED" ||
            r.error_code == "UNKNOWN_ROLE");
}

std::map<std::string, std::string> lab_values() { return {{"patient_code", "P1"}, {"test", "urine"}}; }

} // namespace

Verdict authorization_matrix() {
    auto start = std::chrono::steady_clock::now();
    PlatformHarness h;
    h.bootstrap();
    // Reference docs of both types, stored by the unrestricted scenario role.
    std::map<std::string, std::string> stored;
    for (const std::string type : {"medical-report", "lab-order"}) {
        auto doc = type == "medical-report" ? edoc::create_doc(emr_definition(), rossi_values(), h.now->load())
                                            : edoc::create_doc(lab_order_definition(), lab_values(), h.now->load());
        doc = edoc::attach_signature(doc, h.sa.session.sign_block(edoc::content_bytes(doc), std::nullopt, h.now->load()),
                                     h.sa.id.cert);
        stored[type] = proto::stored_doc_id(h.send(h.sa, K::store_doc, proto::store_doc_body(doc)).payload);
    }

    const std::set<K> docs{K::create_doc, K::store_doc,     K::get_doc,       K::search_docs, K::render_doc,
                           K::verify_doc, K::set_attribute, K::get_attribute, K::list_types};
    struct Subject {
        const char* name;
        Actor* actor;
        Grant grant;
    };
    std::vector<Subject> subjects{
        {"role-set", &h.role_set,
         {{K::install_role, K::revoke_role, K::start_port, K::stop_port, K::status, K::list_types}, std::nullopt}},
        {"definer", &h.definer, {{K::install_definition, K::install_stylesheet, K::list_types}, std::nullopt}},
        {"physician", &h.physician, {docs, std::set<std::string>{"medical-report"}}},
        {"viewer", &h.viewer, {{K::render_doc, K::verify_doc, K::get_doc}, std::nullopt}},
    };

    std::size_t cases = 0;
    std::size_t agree = 0;
    std::ostringstream mismatches;
    int serial = 0;
    for (auto& s : subjects) {
        for (auto kind : proto::kAllCommandKinds) {
            for (const std::string type : {"medical-report", "lab-order"}) {
                bool emr = type == "medical-report";
                xml::Element body{"body"};
                switch (kind) {
                case K::install_definition:
                    body = proto::install_definition_body(emr ? emr_definition() : lab_order_definition());
                    break;
                case K::install_stylesheet:
                    body = proto::install_stylesheet_body(emr ? emr_sheet_en() : lab_sheet());
                    break;
                case K::install_role:
                    body = proto::install_role_body({make_identity("Temp", "temp").cert, {K::list_types}, std::nullopt});
                    break;
                case K::revoke_role:
                    body = proto::revoke_role_body(make_identity("Ghost", "ghost").fp());
                    break;
                case K::create_doc:
                    body = proto::create_doc_body(type, std::nullopt, emr ? rossi_values() : lab_values());
                    break;
                case K::store_doc: {
                    auto doc = emr ? edoc::create_doc(emr_definition(), rossi_values(), h.now->load())
                                   : edoc::create_doc(lab_order_definition(), lab_values(), h.now->load());
                    doc = edoc::attach_signature(
                        doc, s.actor->session.sign_block(edoc::content_bytes(doc), std::nullopt, h.now->load()),
                        s.actor->id.cert);
                    body = proto::store_doc_body(doc);
                    break;
                }
                case K::get_doc:
                    body = proto::get_doc_body(stored[type]);
                    break;
                case K::search_docs:
                    body = proto::search_body({type, {}});
                    break;
                case K::render_doc:
                    body = proto::render_body({stored[type], std::nullopt}, emr ? "medical-report-en" : "lab-order-en");
                    break;
                case K::verify_doc:
                    body = proto::verify_body({stored[type], std::nullopt});
                    break;
                case K::set_attribute:
                    body = proto::set_attribute_body(stored[type], "note-" + std::to_string(++serial), "x");
                    break;
                case K::get_attribute:
                    body = proto::get_attribute_body(stored[type], "state");
                    break;
                case K::start_port:
                case K::stop_port:
                    body = proto::port_control_body("scenario");
                    break;
                case K::list_types:
                case K::status:
                    body = proto::empty_body();
                    break;
                }
                auto reply = h.send(*s.actor, kind, body, admin_kind(kind) ? "administration" : "service");
                bool allowed = !authorization_denial(reply);
                bool expected = oracle_allows(s.grant, kind, type);
                ++cases;
                if (allowed == expected) {
                    ++agree;
                } else {
                    mismatches << ' ' << s.name << '/' << proto::to_string(kind) << '/' << type << "->"
                               << proto::to_string(reply.status) << ':' << reply.error_code;
                }
            }
        }
    }
    auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool pass = agree == cases && cases >= 112 && secs < 10.0;
    std::ostringstream detail;
    detail << percent(agree, cases) << " decisions agree with the role-table oracle (4 roles x "
           << proto::kAllCommandKinds.size() << " kinds x 2 types), " << secs << "s of 10s" << mismatches.str();
    return {pass, detail.str()};
}

Verdict tamper_detection() {
    PlatformHarness h;
    h.bootstrap();
    std::mt19937_64 rng(20260301);
    static constexpr std::string_view kAlnum = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    std::uniform_int_distribution<std::size_t> pick_char(0, kAlnum.size() - 1);
    int twins_ok = 0;
    int tampered_caught = 0;
    std::ostringstream misses;
    auto verify = [&](const edoc::EDoc& doc) {
        auto reply = h.send(h.viewer, K::verify_doc, proto::verify_body({std::nullopt, doc}));
        if (reply.status != proto::Status::ok) return std::optional<bool>{};
        return std::optional<bool>(proto::verification_payload(reply.payload).all_valid);
    };
    for (int i = 0; i < 100; ++i) {
        auto values = rossi_values();
        values["surname"] = "S" + std::to_string(i) + xml::nfc(random_text(rng, 8));
        values["diagnosis"] = "D" + xml::nfc(random_text(rng, 30));
        auto doc = h.signed_emr(h.physician, values);
        auto bytes = edoc::serialize_doc(doc);
        // Candidate bytes: ASCII letters and digits inside field values, all of which are signed.
        auto open = bytes.find("<fields>");
        auto close = bytes.find("</fields>");
        std::vector<std::size_t> spots;
        bool in_text = false;
        bool in_entity = false;
        for (auto p = open; p < close; ++p) {
            if (bytes[p] == '>') in_text = true;
            else if (bytes[p] == '<') in_text = false;
            else if (bytes[p] == '&') in_entity = true;
            else if (bytes[p] == ';') in_entity = false;
            else if (in_text && !in_entity && std::isalnum(static_cast<unsigned char>(bytes[p]))) spots.push_back(p);
        }
        auto at = spots[std::uniform_int_distribution<std::size_t>(0, spots.size() - 1)(rng)];
        char replacement;
        do {
            replacement = kAlnum[pick_char(rng)];
        } while (replacement == bytes[at]);
        auto mutated = bytes;
        mutated[at] = replacement;

        if (verify(edoc::parse_doc(bytes)) == std::optional<bool>(true)) ++twins_ok;
        auto outcome = verify(edoc::parse_doc(mutated));
        if (outcome == std::optional<bool>(false)) {
            ++tampered_caught;
        } else {
            misses << " doc" << i << "@" << at;
        }
    }
    bool pass = twins_ok == 100 && tampered_caught == 100;
    return {pass, "mutated docs reported invalid " + percent(tampered_caught, 100) + ", untouched twins valid " +
                      percent(twins_ok, 100) + misses.str()};
}

namespace {

edoc::EDoc fuzz_doc(std::mt19937_64& rng, const std::vector<Actor*>& signers) {
    std::uniform_int_distribution<int> small(0, 3);
    std::uniform_int_distribution<int> coin(0, 1);
    edoc::EDoc d;
    d.type_name = coin(rng) ? "medical-report" : random_name(rng);
    d.type_version = 1 + small(rng);
    d.created_at = at(2000 + small(rng), 1 + small(rng), 1 + small(rng), small(rng));
    for (int n = small(rng) + 1; n > 0; --n) d.field_values[random_name(rng)] = xml::nfc(random_text(rng, 16));
    for (int n = small(rng); n > 0; --n) d.attributes[random_name(rng)] = xml::nfc(random_text(rng, 8));
    if (coin(rng)) d.doc_id = "d" + std::to_string(small(rng));
    for (int n = small(rng) % 3; n > 0; --n) {
        const auto* who = signers[std::uniform_int_distribution<std::size_t>(0, signers.size() - 1)(rng)];
        std::optional<crypto::ViewBinding> view;
        if (coin(rng)) view = crypto::ViewBinding{random_name(rng), crypto::sha256(random_text(rng))};
        d.signatures.push_back(who->session.sign_block(edoc::content_bytes(d), view, d.created_at));
    }
    return d;
}

xml::Element fuzz_element(std::mt19937_64& rng, int depth) {
    std::uniform_int_distribution<int> small(0, 3);
    xml::Element e{random_name(rng)};
    for (int n = small(rng); n > 0; --n) e.set(random_name(rng), xml::nfc(random_text(rng)));
    if (depth > 0 && small(rng) > 1) {
        for (int n = small(rng); n > 0; --n) e.add(fuzz_element(rng, depth - 1));
    } else if (small(rng) > 0) {
        e.set_text(xml::nfc(random_text(rng)));
    }
    return e;
}

} // namespace

Verdict canonical_codec() {
    std::mt19937_64 rng(777);
    Actor a{"A", "a"};
    Actor b{"B", "b"};
    std::vector<Actor*> signers{&a, &b};

    std::size_t doc_ok = 0;
    std::size_t doc_collisions = 0;
    std::map<std::string, edoc::EDoc> doc_by_bytes;
    for (int i = 0; i < 1000; ++i) {
        auto d = fuzz_doc(rng, signers);
        auto canonical = edoc::serialize_doc(d);
        auto back = edoc::parse_doc(canonical);
        bool ok = back == d && edoc::serialize_doc(back) == canonical &&
                  xml::canonicalize(xml::parse(canonical)) == canonical;
        doc_ok += ok ? 1 : 0;
        auto [it, fresh] = doc_by_bytes.emplace(canonical, d);
        if (!fresh && !(it->second == d)) ++doc_collisions;
    }

    std::size_t env_ok = 0;
    std::size_t env_collisions = 0;
    std::map<std::string, proto::CommandEnvelope> env_by_bytes;
    std::uniform_int_distribution<std::size_t> kind(0, proto::kAllCommandKinds.size() - 1);
    std::uniform_int_distribution<int> minutes(0, 100000);
    for (int i = 0; i < 1000; ++i) {
        xml::Element body{"body"};
        for (int n = static_cast<int>(rng() % 3); n > 0; --n) body.add(fuzz_element(rng, 2));
        const auto* who = signers[i % 2];
        auto env = proto::build_envelope(proto::kAllCommandKinds[kind(rng)], body, who->session,
                                         at(2026, 1, 1) + std::chrono::minutes(minutes(rng)));
        auto canonical = xml::canonicalize(proto::to_xml(env));
        auto back = proto::command_from_xml(xml::parse(canonical));
        proto::NonceCache cache;
        bool verifies = proto::verify_envelope(back, env.issued_at, cache) == crypto::fingerprint(who->id.cert);
        bool ok = back == env && xml::canonicalize(proto::to_xml(back)) == canonical &&
                  xml::canonicalize(xml::parse(canonical)) == canonical && verifies;
        env_ok += ok ? 1 : 0;
        auto [it, fresh] = env_by_bytes.emplace(canonical, env);
        if (!fresh && !(it->second == env)) ++env_collisions;
    }
    bool pass = doc_ok == 1000 && env_ok == 1000 && doc_collisions == 0 && env_collisions == 0;
    std::ostringstream detail;
    detail << "docs " << percent(doc_ok, 1000) << " idempotent+round-trip, " << doc_collisions << " collisions over "
           << doc_by_bytes.size() << " distinct; envelopes " << percent(env_ok, 1000) << ", " << env_collisions
           << " collisions over " << env_by_bytes.size() << " distinct";
    return {pass, detail.str()};
}

Verdict gateway_transparency() {
    PlatformHarness direct_side(true);
    direct_side.bootstrap();
    // A twin platform booted from a copy of the same data dir and the same identity.
    TempDir twin_dir("twin");
    std::filesystem::copy(direct_side.config.data_dir, twin_dir.path() / "data",
                          std::filesystem::copy_options::recursive);
    auto twin_config = direct_side.config;
    twin_config.data_dir = twin_dir.path() / "data";
    twin_config.log_path = twin_dir.path() / "platform.log";
    auto clock = [n = direct_side.now] { return n->load(); };
    platform::Platform twin(twin_config, crypto::SoftKeystore(direct_side.platform_id.ks).open(kPin), clock);
    twin.start();
    proto::Gateway gateway("127.0.0.1", twin.port("service"));
    auto gw_port = gateway.start("127.0.0.1", 0);

    proto::TcpTransport direct("127.0.0.1", direct_side.platform->port("service"));
    proto::GatewayTransport tunneled("http://127.0.0.1:" + std::to_string(gw_port));

    auto& h = direct_side;
    auto emr = h.signed_emr(h.physician);
    auto unsigned_emr = edoc::create_doc(emr_definition(), rossi_values(), h.now->load());
    struct Step {
        Actor* who;
        K kind;
        xml::Element body;
    };
    std::vector<Step> script{
        {&h.definer, K::list_types, proto::empty_body()},
        {&h.physician, K::create_doc, proto::create_doc_body("medical-report", std::nullopt, rossi_values())},
        {&h.physician, K::create_doc, proto::create_doc_body("medical-report", std::nullopt, {{"name", "x"}})},
        {&h.physician, K::store_doc, proto::store_doc_body(emr)},
        {&h.physician, K::store_doc, proto::store_doc_body(unsigned_emr)},
        {&h.physician, K::get_doc, proto::get_doc_body("d1")},
        {&h.physician, K::get_doc, proto::get_doc_body("d99")},
        {&h.physician, K::search_docs, proto::search_body({"medical-report", {}})},
        {&h.viewer, K::render_doc, proto::render_body({"d1", std::nullopt}, "medical-report-it")},
        {&h.viewer, K::verify_doc, proto::verify_body({"d1", std::nullopt})},
        {&h.physician, K::set_attribute, proto::set_attribute_body("d1", "state", "processed")},
        {&h.physician, K::get_attribute, proto::get_attribute_body("d1", "state")},
        {&h.definer, K::install_definition, proto::install_definition_body(emr_definition())},
        {&h.definer, K::install_stylesheet, proto::install_stylesheet_body(lab_sheet())},
        {&h.physician, K::create_doc, proto::create_doc_body("lab-order", std::nullopt, {{"patient_code", "P"}})},
        {&h.viewer, K::store_doc, proto::store_doc_body(emr)},
        {&h.physician, K::status, proto::empty_body()},
    };
    std::set<K> kinds;
    std::size_t same = 0;
    std::ostringstream diffs;
    for (std::size_t i = 0; i < script.size(); ++i) {
        auto& step = script[i];
        kinds.insert(step.kind);
        // One envelope, sent once down each path; each platform has its own replay cache.
        auto env = proto::build_envelope(step.kind, step.body, step.who->session, h.now->load());
        auto a = proto::round_trip(direct, env);
        auto b = proto::round_trip(tunneled, env);
        proto::verify_response(a, h.platform->certificate());
        proto::verify_response(b, twin.certificate());
        if (a.status == b.status && a.error_code == b.error_code &&
            xml::canonicalize(a.payload) == xml::canonicalize(b.payload)) {
            ++same;
        } else {
            diffs << " step" << i << ':' << proto::to_string(a.status) << '/' << a.error_code << " vs "
                  << proto::to_string(b.status) << '/' << b.error_code;
        }
    }
    gateway.stop();
    twin.shutdown();
    bool pass = same == script.size() && kinds.size() >= 10;
    return {pass, percent(same, script.size()) + " commands identical (" + std::to_string(kinds.size()) +
                      " distinct kinds) direct vs HTTP-tunneled" + diffs.str()};
}

} // namespace sda::acceptance
