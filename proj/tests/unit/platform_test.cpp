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

#include "sda/common/files.hpp"
#include "sda/proto/transport.hpp"

#include "platform_harness.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace sda;
using namespace sda::testing;
using proto::CommandKind;
using proto::Status;
using K = proto::CommandKind;

namespace {

void expect_ok(const proto::ResponseEnvelope& r) {
    EXPECT_EQ(r.status, Status::ok) << r.error_code << " " << xml::canonicalize(r.payload);
}

void expect(const proto::ResponseEnvelope& r, Status s, std::string_view code) {
    EXPECT_EQ(r.status, s) << r.error_code;
    EXPECT_EQ(r.error_code, code);
}

std::vector<std::string> ids(const proto::ResponseEnvelope& r) {
    std::vector<std::string> out;
    for (const auto& h : proto::search_hits(r.payload)) {
        out.push_back(h.doc_id);
    }
    return out;
}

} // namespace

TEST(PlatformStart, MinimalConfigReportsThreePortsAndNoDocs) {
    PlatformHarness h(true);
    auto r = h.send(h.role_set, K::status, proto::empty_body(), "administration");
    expect_ok(r);
    auto st = proto::platform_status(r.payload);
    EXPECT_EQ(st.docs, 0u);
    ASSERT_EQ(st.ports.size(), 3u);
    for (const auto& p : st.ports) {
        EXPECT_TRUE(p.running) << p.name;
        EXPECT_NE(p.tcp_port, 0);
    }
    EXPECT_NO_THROW(proto::verify_response(r, h.platform_id.id.cert));
}

TEST(PlatformStart, MissingRoleSetCertificateRefuses) {
    PlatformHarness h;
    auto config = h.config;
    config.role_set_certificate = h.dir.path() / "nope.xml";
    try {
        platform::Platform p(config, h.platform_id.ks.open(kPin));
        FAIL();
    } catch (const sda::error& e) {
        EXPECT_EQ(e.code(), errc::startup);
    }
}

TEST(PlatformStart, ConfigNeedsExactlyOneLocalAdministrationPort) {
    PlatformHarness h;
    auto config = h.config;
    config.ports.pop_back();
    EXPECT_THROW(platform::check_config(config), sda::error);
    config = h.config;
    config.ports.back().visibility = platform::Visibility::external;
    EXPECT_THROW(platform::check_config(config), sda::error);
}

TEST(PlatformStart, ConfigFileRoundTripAndEnvOverride) {
    PlatformHarness h;
    auto cfg = h.config;
    cfg.ports[0].allowed_kinds = std::set<CommandKind>{K::get_doc, K::store_doc};
    cfg.static_attributes["partition"] = "output";
    auto path = h.dir.path() / "server.xml";
    write_file_atomic(path, platform::config_to_xml(cfg));
    auto back = platform::load_config(path);
    EXPECT_EQ(back.ports[0].allowed_kinds, cfg.ports[0].allowed_kinds);
    EXPECT_EQ(back.data_dir, cfg.data_dir);
    EXPECT_EQ(back.static_attributes, cfg.static_attributes);
    ::setenv("SDA_DATA_DIR", "/tmp/elsewhere", 1);
    EXPECT_EQ(platform::load_config(path).data_dir, "/tmp/elsewhere");
    ::unsetenv("SDA_DATA_DIR");
}

TEST(Authorize, DefinerInstallsDefinition) {
    PlatformHarness h;
    h.grant(h.definer, {K::install_definition});
    expect_ok(h.send(h.definer, K::install_definition, proto::install_definition_body(emr_definition())));
}

TEST(Authorize, PhysicianCannotReadOtherTypes) {
    PlatformHarness h;
    h.bootstrap();
    auto lab = edoc::create_doc(lab_order_definition(), {{"patient_code", "P1"}}, h.now->load());
    auto block = h.sa.session.sign_block(edoc::content_bytes(lab), std::nullopt, h.now->load());
    lab = edoc::attach_signature(lab, block, h.sa.id.cert);
    auto stored = h.send(h.sa, K::store_doc, proto::store_doc_body(lab));
    expect_ok(stored);
    auto id = proto::stored_doc_id(stored.payload);
    expect(h.send(h.physician, K::get_doc, proto::get_doc_body(id)), Status::denied, "TYPE_NOT_ALLOWED");
    expect_ok(h.send(h.sa, K::get_doc, proto::get_doc_body(id)));
}

TEST(Authorize, UnregisteredFingerprintIsUnknownRole) {
    PlatformHarness h;
    Actor stranger("Stranger", "nobody");
    for (auto k : proto::kAllCommandKinds) {
        expect(h.send(stranger, k, proto::empty_body(), "administration"), Status::denied, "UNKNOWN_ROLE");
    }
}

TEST(Authorize, PortRestrictionAppliesToFullyPrivilegedRole) {
    PlatformHarness h;
    h.config.ports[0].allowed_kinds = std::set<CommandKind>{K::store_doc};
    h.restart();
    h.bootstrap();
    expect(h.send(h.sa, K::search_docs, proto::search_body({}), "scenario"), Status::denied, "COMMAND_NOT_ALLOWED");
    expect_ok(h.send(h.sa, K::search_docs, proto::search_body({}), "service"));
}

TEST(Authorize, RoleSetCommandsOnlyFromRoleSetIdentity) {
    PlatformHarness h;
    h.grant(h.definer, {K::install_role, K::install_definition});
    auto r = h.send(h.definer, K::install_role, proto::install_role_body({h.viewer.id.cert, {K::get_doc}, {}}),
                    "administration");
    expect(r, Status::denied, "COMMAND_NOT_ALLOWED");
}

TEST(AdminPort, StopAndStartServicePort) {
    PlatformHarness h(true);
    h.bootstrap();
    auto service = h.platform->port("service");
    auto scenario = h.platform->port("scenario");
    proto::TcpTransport via_service("127.0.0.1", service);
    proto::TcpTransport via_scenario("127.0.0.1", scenario);
    auto ping = [&](proto::Transport& t) {
        return proto::round_trip(t, h.envelope(h.sa, K::search_docs, proto::search_body({})));
    };
    expect_ok(ping(via_service));

    expect_ok(h.send(h.role_set, K::stop_port, proto::port_control_body("service"), "administration"));
    try {
        (void)ping(via_service);
        FAIL() << "service port still accepting";
    } catch (const sda::error& e) {
        EXPECT_EQ(e.code(), errc::unreachable);
    }
    expect_ok(ping(via_scenario));
    auto st = proto::platform_status(h.send(h.role_set, K::status, proto::empty_body(), "administration").payload);
    for (const auto& p : st.ports) {
        EXPECT_EQ(p.running, p.name != "service");
    }

    expect_ok(h.send(h.role_set, K::start_port, proto::port_control_body("service"), "administration"));
    EXPECT_EQ(h.platform->port("service"), service);
    expect_ok(ping(via_service));
}

TEST(AdminPort, PortControlElsewhereIsDenied) {
    PlatformHarness h(true);
    expect(h.send(h.role_set, K::stop_port, proto::port_control_body("service"), "scenario"), Status::denied,
           "COMMAND_NOT_ALLOWED");
    expect(h.send(h.role_set, K::stop_port, proto::port_control_body("administration"), "administration"),
           Status::denied, "COMMAND_NOT_ALLOWED");
    expect(h.send(h.role_set, K::stop_port, proto::port_control_body("backdoor"), "administration"), Status::error,
           "UNKNOWN_PORT");
}

TEST(HandleCommand, StoreSignedReport) {
    PlatformHarness h;
    h.bootstrap();
    auto r = h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician)));
    expect_ok(r);
    EXPECT_EQ(proto::stored_doc_id(r.payload), "d1");
    auto got = h.send(h.viewer, K::get_doc, proto::get_doc_body("d1"));
    expect_ok(got);
    EXPECT_EQ(proto::doc_payload(got.payload).doc_id, "d1");
}

TEST(HandleCommand, UnsignedAndBadlySignedDocsRejected) {
    PlatformHarness h;
    h.bootstrap();
    expect(h.send(h.sa, K::store_doc, proto::store_doc_body(rossi_doc())), Status::error, "UNSIGNED_DOC");
    auto doc = h.signed_emr(h.physician);
    doc.field_values["diagnosis"] = "forged";
    expect(h.send(h.sa, K::store_doc, proto::store_doc_body(doc)), Status::error, "INVALID_SIGNATURE");
    Actor stranger("Stranger", "nobody");
    expect(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(stranger))), Status::error,
           "INVALID_SIGNATURE");
    auto st = proto::platform_status(h.send(h.role_set, K::status, proto::empty_body(), "administration").payload);
    EXPECT_EQ(st.docs, 0u);
}

TEST(HandleCommand, CreateDocDoesNotStore) {
    PlatformHarness h;
    h.bootstrap();
    auto r = h.send(h.sa, K::create_doc, proto::create_doc_body("medical-report", std::nullopt, rossi_values()));
    expect_ok(r);
    auto doc = proto::doc_payload(r.payload);
    EXPECT_TRUE(doc.signatures.empty());
    EXPECT_EQ(doc.field_values, rossi_values());
    auto missing = rossi_values();
    missing.erase("diagnosis");
    auto bad = h.send(h.sa, K::create_doc, proto::create_doc_body("medical-report", 1, missing));
    expect(bad, Status::error, "VALIDATION_FAILED");
    EXPECT_NE(xml::canonicalize(bad.payload).find("MISSING_FIELD(diagnosis)"), std::string::npos);
    EXPECT_EQ(h.platform->status().docs, 0u);
}

TEST(HandleCommand, SearchMatchesBruteForceFilter) {
    PlatformHarness h;
    h.bootstrap();
    std::vector<std::string> states = {"pending", "processed", "pending"};
    for (const auto& s : states) {
        auto id = proto::stored_doc_id(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))).payload);
        expect_ok(h.send(h.sa, K::set_attribute, proto::set_attribute_body(id, "state", s)));
    }
    proto::SearchQuery q{"medical-report", {{"state", "pending"}}};
    auto got = ids(h.send(h.sa, K::search_docs, proto::search_body(q)));
    std::vector<std::string> oracle;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] == "pending") oracle.push_back("d" + std::to_string(i + 1));
    }
    EXPECT_EQ(got, oracle);
}

TEST(HandleCommand, SearchResultsAreFilteredByAllowedTypes) {
    PlatformHarness h;
    h.bootstrap();
    auto lab = edoc::create_doc(lab_order_definition(), {{"patient_code", "P1"}}, h.now->load());
    lab = edoc::attach_signature(lab, h.sa.session.sign_block(edoc::content_bytes(lab), std::nullopt, h.now->load()),
                                 h.sa.id.cert);
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(lab)));
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    EXPECT_EQ(ids(h.send(h.sa, K::search_docs, proto::search_body({}))), (std::vector<std::string>{"d1", "d2"}));
    EXPECT_EQ(ids(h.send(h.physician, K::search_docs, proto::search_body({}))), (std::vector<std::string>{"d2"}));
    expect(h.send(h.physician, K::search_docs, proto::search_body({"lab-order", {}})), Status::denied,
           "TYPE_NOT_ALLOWED");
}

TEST(HandleCommand, RenderAndVerify) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    auto view = h.send(h.viewer, K::render_doc, proto::render_body({"d1", {}}, "medical-report-it"));
    expect_ok(view);
    auto expected = edoc::render(rossi_doc(), emr_sheet_it());
    EXPECT_EQ(proto::view_payload(view.payload).text, expected.text);
    auto by_locale = h.send(h.viewer, K::render_doc, proto::render_body({"d1", {}}, std::nullopt, "en"));
    EXPECT_EQ(proto::view_payload(by_locale.payload).stylesheet_id, "medical-report-en");
    expect(h.send(h.viewer, K::render_doc, proto::render_body({"d1", {}}, "nope")), Status::error,
           "UNKNOWN_STYLESHEET");
    auto v = h.send(h.viewer, K::verify_doc, proto::verify_body({"d1", {}}));
    expect_ok(v);
    auto report = proto::verification_payload(v.payload);
    EXPECT_TRUE(report.all_valid);
    ASSERT_EQ(report.view_binding_checks.size(), 1u);
    EXPECT_TRUE(report.view_binding_checks[0].ok);
    auto tampered = h.signed_emr(h.physician);
    tampered.field_values["diagnosis"] = "x";
    auto tv = h.send(h.viewer, K::verify_doc, proto::verify_body({std::nullopt, tampered}));
    expect_ok(tv);
    EXPECT_FALSE(proto::verification_payload(tv.payload).all_valid);
}

TEST(HandleCommand, AttributesAndStaticAttributes) {
    PlatformHarness h;
    h.config.static_attributes["partition"] = "output";
    h.restart();
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    auto part = h.send(h.sa, K::get_attribute, proto::get_attribute_body("d1", "partition"));
    EXPECT_EQ(proto::attribute_value(part.payload), "output");
    expect(h.send(h.sa, K::set_attribute, proto::set_attribute_body("d1", "partition", "input")), Status::error,
           "IMMUTABLE_ATTRIBUTE");
    expect_ok(h.send(h.sa, K::set_attribute, proto::set_attribute_body("d1", "state", "pending")));
    EXPECT_EQ(proto::attribute_value(h.send(h.sa, K::get_attribute, proto::get_attribute_body("d1", "state")).payload),
              "pending");
    EXPECT_EQ(proto::attribute_value(h.send(h.sa, K::get_attribute, proto::get_attribute_body("d1", "nope")).payload),
              std::nullopt);
    expect(h.send(h.sa, K::get_attribute, proto::get_attribute_body("d9", "state")), Status::error, "UNKNOWN_DOC");
    EXPECT_TRUE(h.platform->audit().empty());
}

TEST(InstallRole, ViewerRendersAfterInstall) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    Actor second_viewer("Viewer 2", "viewer");
    expect(h.send(second_viewer, K::render_doc, proto::render_body({"d1", {}}, "medical-report-en")), Status::denied,
           "UNKNOWN_ROLE");
    expect_ok(h.grant(second_viewer, {K::render_doc, K::verify_doc, K::get_doc}));
    expect_ok(h.send(second_viewer, K::render_doc, proto::render_body({"d1", {}}, "medical-report-en")));
}

TEST(InstallRole, RevocationIsImmediateAndDuplicateReplaces) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.definer, K::list_types, proto::empty_body()));
    h.grant(h.definer, {K::install_definition});
    expect(h.send(h.definer, K::list_types, proto::empty_body()), Status::denied, "COMMAND_NOT_ALLOWED");
    expect_ok(h.send(h.role_set, K::revoke_role, proto::revoke_role_body(h.definer.id.fp()), "administration"));
    expect(h.send(h.definer, K::install_definition, proto::install_definition_body(emr_definition(2))), Status::denied,
           "UNKNOWN_ROLE");
    expect(h.send(h.role_set, K::revoke_role, proto::revoke_role_body(h.definer.id.fp()), "administration"),
           Status::error, "NOT_FOUND");
}

TEST(InstallRole, CertificateMustChainToRoleSetOrSelf) {
    PlatformHarness h;
    Actor issued(make_identity("Issued", "physician", &h.role_set.id));
    expect_ok(h.grant(issued, {K::status}));
    auto forged = make_identity("Forged", "physician");
    forged.cert.subject_name = "Tampered";
    Actor bad(std::move(forged));
    expect(h.grant(bad, {K::status}), Status::error, "MALFORMED_CERT");
}

TEST(Definitions, AppendOnlyAndPinnedVersionsStillVerify) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    expect(h.send(h.definer, K::install_definition, proto::install_definition_body(emr_definition())), Status::error,
           "DUPLICATE_DEFINITION");
    auto v2 = emr_definition(2);
    v2.fields.push_back({"notes", edoc::FieldKind::string, {}, false, std::nullopt, "Notes"});
    expect_ok(h.send(h.definer, K::install_definition, proto::install_definition_body(v2)));
    auto r = h.send(h.viewer, K::verify_doc, proto::verify_body({"d1", {}}));
    EXPECT_TRUE(proto::verification_payload(r.payload).all_valid);
    auto created = h.send(h.sa, K::create_doc, proto::create_doc_body("medical-report", std::nullopt, rossi_values()));
    EXPECT_EQ(proto::doc_payload(created.payload).type_version, 2);
    expect(h.send(h.definer, K::install_stylesheet, proto::install_stylesheet_body(emr_sheet_it())), Status::error,
           "DUPLICATE_STYLESHEET");
    edoc::Stylesheet orphan{"orphan", "ghost", "en", "x"};
    expect(h.send(h.definer, K::install_stylesheet, proto::install_stylesheet_body(orphan)), Status::error,
           "UNKNOWN_TYPE");
}

TEST(Persistence, RestartKeepsCounts) {
    PlatformHarness h;
    h.bootstrap();
    for (int i = 0; i < 3; ++i) {
        expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    }
    auto before = h.platform->status();
    h.restart();
    auto after = h.platform->status();
    EXPECT_EQ(after.docs, before.docs);
    EXPECT_EQ(after.definitions, before.definitions);
    EXPECT_EQ(after.stylesheets, before.stylesheets);
    EXPECT_EQ(after.roles, before.roles);
    expect_ok(h.send(h.viewer, K::get_doc, proto::get_doc_body("d3")));
}

TEST(Persistence, CorruptDocRefusesStartupNamingIt) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    auto path = h.config.data_dir / "docs" / "d2.xml";
    auto text = read_file(path);
    auto at_pos = text.find("Doppler");
    text.replace(at_pos, 7, "Dopplex");
    write_file_atomic(path, text);
    h.platform.reset();
    try {
        h.boot(false);
        FAIL();
    } catch (const sda::error& e) {
        EXPECT_EQ(e.code(), errc::startup);
        EXPECT_NE(std::string(e.what()).find("d2"), std::string::npos) << e.what();
    }
}

TEST(Persistence, GapInDocIdsRefusesStartup) {
    PlatformHarness h;
    h.bootstrap();
    for (int i = 0; i < 3; ++i) {
        expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    }
    std::filesystem::remove(h.config.data_dir / "docs" / "d2.xml");
    h.platform.reset();
    EXPECT_THROW(h.boot(false), sda::error);
}

TEST(Persistence, HundredDocsSearchSnapshotSurvivesReload) {
    PlatformHarness h;
    h.bootstrap();
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        auto values = rossi_values();
        values["surname"] = "S" + std::to_string(i);
        auto id = proto::stored_doc_id(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician, values))).payload);
        expect_ok(h.send(h.sa, K::set_attribute,
                         proto::set_attribute_body(id, "state", rng() % 2 ? "pending" : "processed")));
    }
    auto snapshot = [&] {
        std::vector<std::vector<std::string>> out;
        for (const char* s : {"pending", "processed"}) {
            out.push_back(ids(h.send(h.sa, K::search_docs, proto::search_body({"medical-report", {{"state", s}}}))));
        }
        return out;
    };
    auto before = snapshot();
    h.restart();
    EXPECT_EQ(snapshot(), before);
    EXPECT_EQ(before[0].size() + before[1].size(), 100u);
}

TEST(Atomicity, ErrorsLeaveObservationsUnchanged) {
    PlatformHarness h;
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    auto observe = [&] {
        auto st = h.platform->status();
        return std::tuple{st.docs, st.definitions, st.stylesheets, st.roles,
                          xml::canonicalize(h.send(h.sa, K::get_doc, proto::get_doc_body("d1")).payload),
                          ids(h.send(h.sa, K::search_docs, proto::search_body({})))};
    };
    auto before = observe();
    auto bad_doc = h.signed_emr(h.physician);
    bad_doc.field_values["name"] = "x";
    std::vector<proto::ResponseEnvelope> failures = {
        h.send(h.sa, K::store_doc, proto::store_doc_body(bad_doc)),
        h.send(h.sa, K::store_doc, proto::store_doc_body(rossi_doc())),
        h.send(h.sa, K::set_attribute, proto::set_attribute_body("d7", "state", "x")),
        h.send(h.definer, K::install_definition, proto::install_definition_body(emr_definition())),
        h.send(h.definer, K::install_stylesheet, proto::install_stylesheet_body({"s", "medical-report", "en", "{field:zz}"})),
        h.send(h.role_set, K::revoke_role, proto::revoke_role_body(h.role_set.id.fp()), "administration"),
        h.send(h.sa, K::store_doc, xml::Element{"body"}),
    };
    for (const auto& f : failures) {
        EXPECT_EQ(f.status, Status::error) << f.error_code;
    }
    EXPECT_EQ(observe(), before);
}

TEST(Envelope, ReplayedAndStaleCommandsDenied) {
    PlatformHarness h;
    h.bootstrap();
    auto env = h.envelope(h.sa, K::search_docs, proto::search_body({}));
    expect_ok(h.platform->handle(env, "service"));
    expect(h.platform->handle(env, "service"), Status::denied, "REPLAY");
    auto old = h.envelope(h.sa, K::search_docs, proto::search_body({}));
    h.advance(std::chrono::seconds(301));
    expect(h.platform->handle(old, "service"), Status::denied, "STALE_TIMESTAMP");
}

TEST(Wire, OversizeFrameAnsweredThenClosed) {
    PlatformHarness h;
    h.config.max_frame_bytes = 2048;
    h.restart(true);
    auto s = proto::Socket::connect("127.0.0.1", h.platform->port("service"));
    s.write_all(std::string("\x00\xa0\x00\x00", 4));
    auto reply = proto::read_frame(s, 1 << 20);
    ASSERT_TRUE(reply);
    auto resp = proto::response_from_xml(xml::parse(*reply));
    EXPECT_EQ(resp.status, Status::error);
    EXPECT_EQ(resp.error_code, "OVERSIZE_FRAME");
}

TEST(Wire, GarbageIsMalformedAndConnectionSurvives) {
    PlatformHarness h(true);
    h.bootstrap();
    auto s = proto::Socket::connect("127.0.0.1", h.platform->port("service"));
    proto::write_frame(s, "<not-closed>");
    auto first = proto::response_from_xml(xml::parse(*proto::read_frame(s, 1 << 20)));
    EXPECT_EQ(first.error_code, "MALFORMED");
    proto::write_frame(s, xml::canonicalize(proto::to_xml(h.envelope(h.sa, K::search_docs, proto::search_body({})))));
    auto second = proto::response_from_xml(xml::parse(*proto::read_frame(s, 1 << 20)));
    EXPECT_EQ(second.status, Status::ok);
}

TEST(Wire, GatewayTunnelMatchesDirect) {
    PlatformHarness h(true);
    h.bootstrap();
    expect_ok(h.send(h.sa, K::store_doc, proto::store_doc_body(h.signed_emr(h.physician))));
    proto::Gateway gw("127.0.0.1", h.platform->port("service"));
    auto gw_port = gw.start("127.0.0.1", 0);
    proto::TcpTransport direct("127.0.0.1", h.platform->port("service"));
    proto::GatewayTransport tunnel("http://127.0.0.1:" + std::to_string(gw_port));
    auto a = proto::round_trip(direct, h.envelope(h.viewer, K::get_doc, proto::get_doc_body("d1")));
    auto b = proto::round_trip(tunnel, h.envelope(h.viewer, K::get_doc, proto::get_doc_body("d1")));
    EXPECT_EQ(a.status, b.status);
    EXPECT_EQ(a.error_code, b.error_code);
    EXPECT_EQ(a.payload, b.payload);
    auto delayed = h.envelope(h.viewer, K::get_doc, proto::get_doc_body("d1"));
    h.advance(std::chrono::seconds(400));
    auto late = proto::round_trip(tunnel, delayed);
    expect(late, Status::denied, "STALE_TIMESTAMP");
}

TEST(Log, OneLinePerCommand) {
    PlatformHarness h;
    h.bootstrap();
    Actor stranger("Stranger", "nobody");
    (void)h.send(stranger, K::get_doc, proto::get_doc_body("d1"));
    h.platform.reset();
    std::ifstream in(h.config.log_path);
    std::vector<std::string> lines;
    for (std::string line; std::getline(in, line);) {
        lines.push_back(line);
    }
    ASSERT_EQ(lines.size(), 10u);
    EXPECT_NE(lines.back().find(" service " + stranger.id.fp().prefix() + " GET_DOC DENIED UNKNOWN_ROLE"),
              std::string::npos)
        << lines.back();
}
