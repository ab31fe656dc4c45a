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

#include "sda/client/client.hpp"
#include "sda/client/defman.hpp"
#include "sda/client/scendesk.hpp"
#include "sda/client/wysiwys.hpp"
#include "sda/common/files.hpp"

#include "platform_harness.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace sda;
using namespace sda::testing;
using namespace sda::client;
using K = proto::CommandKind;

namespace {

errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const sda::error& e) {
        return e.code();
    }
    return errc::internal;
}

std::string verbatim_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const PlatformError& e) {
        return e.verbatim();
    }
    return "no platform error";
}

// Keystores are copied per client because open() mutates lockout state.
Client connect(PlatformHarness& h, crypto::SoftKeystore ks, const std::string& port = "service") {
    return Client(std::make_unique<LoopbackTransport>(*h.platform, port), ks.open(kPin), h.platform->certificate(),
                  [n = h.now] { return n->load(); });
}

edoc::DocTypeDefinition letter_definition() {
    using edoc::FieldKind;
    edoc::DocTypeDefinition def;
    def.type_name = "discharge-letter";
    def.version = 1;
    def.fields = {
        {"name", FieldKind::string, {}, true, std::nullopt, "Name"},
        {"surname", FieldKind::string, {}, true, std::nullopt, "Surname"},
        {"clinic", FieldKind::string, {}, true, std::nullopt, "Clinic"},
        {"summary", FieldKind::string, {}, true, std::nullopt, "Summary"},
        {"test", FieldKind::string, {}, false, std::nullopt, "Lab test"},
    };
    def.stylesheet_ids = {"letter-en"};
    return def;
}

edoc::Stylesheet letter_sheet() {
    return {"letter-en", "discharge-letter", "en", "{field:surname} {field:name} ({field:clinic}): {field:summary}"};
}

ProcessingRules letter_rules() {
    ProcessingRules r;
    r.output_type = "discharge-letter";
    r.rules = {CopyRule{"name", "medical-report", "name"}, CopyRule{"surname", "medical-report", "surname"},
               ConstRule{"clinic", "Angiology"}, PromptRule{"summary", "Summary for the GP"}};
    return r;
}

const Confirm kYes = [](const edoc::RenderedView&) { return true; };

struct Desk : PlatformHarness {
    Actor referent{"Referent", "referent"};
    Desk() {
        bootstrap();
        grant(referent, document_kinds());
        send(definer, K::install_definition, proto::install_definition_body(letter_definition()));
        send(definer, K::install_stylesheet, proto::install_stylesheet_body(letter_sheet()));
    }
    std::string store_emr() {
        return proto::stored_doc_id(send(sa, K::store_doc, proto::store_doc_body(signed_emr(physician))).payload);
    }
};

} // namespace

TEST(Defman, InstallDefinitionAndStylesheets) {
    PlatformHarness h;
    h.grant(h.definer, {K::install_definition, K::install_stylesheet, K::list_types});
    auto c = connect(h, h.definer.ks);
    defman_install(c, emr_definition(), {emr_sheet_it(), emr_sheet_en()});
    auto cat = c.list_types();
    ASSERT_EQ(cat.definitions.size(), 1u);
    EXPECT_EQ(cat.definitions[0], emr_definition());
    EXPECT_EQ(cat.stylesheets.size(), 2u);
}

TEST(Defman, NonDefinerIsDenied) {
    PlatformHarness h;
    h.grant(h.physician, document_kinds());
    auto c = connect(h, h.physician.ks);
    EXPECT_EQ(verbatim_of([&] { defman_install(c, emr_definition(), {}); }), "DENIED/COMMAND_NOT_ALLOWED");
}

TEST(Defman, BadStylesheetFailsLocallyBeforeSending) {
    PlatformHarness h;
    h.grant(h.definer, {K::install_definition, K::install_stylesheet});
    auto c = connect(h, h.definer.ks);
    edoc::Stylesheet bad{"bad", "medical-report", "en", "{field:blood_type}"};
    EXPECT_EQ(code_of([&] { defman_install(c, emr_definition(), {bad}); }), errc::bad_template);
    EXPECT_EQ(h.platform->status().definitions, 0u);
}

TEST(Defman, FilesRoundTrip) {
    TempDir dir("defman");
    write_file_atomic(dir.path() / "emr.xml", xml::canonicalize(edoc::to_xml(emr_definition())));
    write_file_atomic(dir.path() / "it.xml", xml::canonicalize(edoc::to_xml(emr_sheet_it())));
    EXPECT_EQ(load_definition(dir.path() / "emr.xml"), emr_definition());
    EXPECT_EQ(load_stylesheet(dir.path() / "it.xml"), emr_sheet_it());
}

TEST(Roleman, InstallPhysicianThenRevoke) {
    PlatformHarness h;
    h.bootstrap();
    auto admin = connect(h, h.role_set.ks, "administration");
    Actor dr_b("Dr B", "physician");
    admin.install_role({dr_b.id.cert,
                        {K::create_doc, K::store_doc, K::get_doc, K::search_docs, K::render_doc, K::verify_doc},
                        std::set<std::string>{"medical-report"}});
    auto b = connect(h, dr_b.ks);
    auto doc = b.create_doc("medical-report", rossi_values());
    EXPECT_EQ(doc.field_values, rossi_values());
    auto signed_doc = h.signed_emr(dr_b);
    auto id = b.store_doc(signed_doc);
    EXPECT_EQ(b.get_doc(id).doc_id, id);
    admin.revoke_role(dr_b.id.fp());
    EXPECT_EQ(verbatim_of([&] { (void)b.get_doc(id); }), "DENIED/UNKNOWN_ROLE");
}

TEST(Roleman, MalformedCertificateFileIsLocalError) {
    TempDir dir("roleman");
    write_file_atomic(dir.path() / "c.xml", "<certificate version=\"1\"><serial>1</serial></certificate>");
    EXPECT_EQ(code_of([&] { (void)crypto::load_certificate(dir.path() / "c.xml"); }), errc::malformed_cert);
}

TEST(Client, ResponseSignatureCheckedAgainstPlatformCertificate) {
    PlatformHarness h;
    h.bootstrap();
    Actor impostor("Impostor", "platform");
    Client c(std::make_unique<LoopbackTransport>(*h.platform, "service"), crypto::SoftKeystore(h.sa.ks).open(kPin), impostor.id.cert,
             [n = h.now] { return n->load(); });
    EXPECT_EQ(code_of([&] { (void)c.search({}); }), errc::bad_response_signature);
}

TEST(Scendesk, ComposeStoresOutputAndMarksInput) {
    Desk d;
    auto input = d.store_emr();
    auto c = connect(d, d.referent.ks);
    auto ks = d.referent.ks;
    auto result = scendesk_compose(c, letter_rules(), {input}, {{"summary", "Discharged, no follow-up."}}, ks, kPin,
                                   kYes, std::nullopt, "en", d.now->load());
    EXPECT_EQ(result.output.field_values.at("name"), "Anna");
    EXPECT_EQ(result.output.field_values.at("surname"), "Rossi");
    EXPECT_EQ(result.output.field_values.at("clinic"), "Angiology");
    EXPECT_EQ(result.output.field_values.at("summary"), "Discharged, no follow-up.");
    EXPECT_EQ(result.marked, std::vector<std::string>{input});
    EXPECT_EQ(c.get_attribute(input, "state"), "processed");
    auto stored = c.get_doc(result.output_doc_id);
    EXPECT_TRUE(c.verify({result.output_doc_id, {}}).all_valid);
    EXPECT_EQ(stored.signatures.front().signer_fingerprint, d.referent.id.fp());
}

TEST(Scendesk, MissingAnswerIsUnresolvedAndSideEffectFree) {
    Desk d;
    auto input = d.store_emr();
    auto c = connect(d, d.referent.ks);
    auto ks = d.referent.ks;
    try {
        (void)scendesk_compose(c, letter_rules(), {input}, {}, ks, kPin, kYes, std::nullopt, "en", d.now->load());
        FAIL();
    } catch (const UnresolvedFields& e) {
        ASSERT_EQ(e.prompts().size(), 1u);
        EXPECT_EQ(e.prompts()[0].out_field, "summary");
        EXPECT_EQ(e.prompts()[0].label, "Summary for the GP");
        EXPECT_EQ(e.detail(), "summary");
    }
    EXPECT_EQ(c.get_attribute(input, "state"), std::nullopt);
    EXPECT_EQ(d.platform->status().docs, 1u);
    EXPECT_EQ(ks.failure_counter(), 0);
}

TEST(Scendesk, TwoInputsFeedDisjointCopyRules) {
    Desk d;
    auto emr = d.store_emr();
    auto lab = edoc::create_doc(lab_order_definition(), {{"patient_code", "P1"}, {"test", "urine"}}, d.now->load());
    lab = edoc::attach_signature(lab, d.sa.session.sign_block(edoc::content_bytes(lab), std::nullopt, d.now->load()),
                                 d.sa.id.cert);
    auto lab_id = proto::stored_doc_id(d.send(d.sa, K::store_doc, proto::store_doc_body(lab)).payload);
    auto rules = letter_rules();
    rules.rules.push_back(CopyRule{"test", "lab-order", "test"});
    auto c = connect(d, d.referent.ks);
    auto ks = d.referent.ks;
    auto result = scendesk_compose(c, rules, {emr, lab_id}, {{"summary", "ok"}}, ks, kPin, kYes, "letter-en",
                                   std::nullopt, d.now->load());
    // Oracle: apply each rule by hand.
    auto emr_doc = c.get_doc(emr);
    std::map<std::string, std::string> expected = {{"name", emr_doc.field_values.at("name")},
                                                   {"surname", emr_doc.field_values.at("surname")},
                                                   {"clinic", "Angiology"},
                                                   {"summary", "ok"},
                                                   {"test", lab.field_values.at("test")}};
    EXPECT_EQ(result.output.field_values, expected);
    EXPECT_EQ(result.marked, (std::vector<std::string>{emr, lab_id}));
}

TEST(Scendesk, CompositionIsDeterministic) {
    Desk d;
    auto input = d.store_emr();
    auto c = connect(d, d.referent.ks);
    auto in = c.get_doc(input);
    auto def = letter_definition();
    auto a = compose_output(letter_rules(), def, {in}, {{"summary", "s"}}, d.now->load());
    auto b = compose_output(letter_rules(), def, {in}, {{"summary", "s"}}, d.now->load());
    EXPECT_EQ(edoc::content_bytes(a), edoc::content_bytes(b));
}

TEST(Scendesk, RuleChecks) {
    Desk d;
    auto c = connect(d, d.referent.ks);
    auto cat = c.list_types();
    auto dup = letter_rules();
    dup.rules.push_back(ConstRule{"clinic", "again"});
    EXPECT_EQ(code_of([&] { check_rules(dup, cat); }), errc::validation_failed);
    auto bad_source = letter_rules();
    bad_source.rules[0] = CopyRule{"name", "medical-report", "shoe_size"};
    EXPECT_EQ(code_of([&] { check_rules(bad_source, cat); }), errc::validation_failed);
    EXPECT_NO_THROW(check_rules(letter_rules(), cat));
    EXPECT_EQ(rules_from_xml(to_xml(letter_rules())).rules.size(), 4u);
}

TEST(Scendesk, PromptSetMatchesOracleOverRandomRuleSets) {
    std::mt19937_64 rng(11);
    auto def = letter_definition();
    std::uniform_int_distribution<int> pick(0, 3);
    for (int trial = 0; trial < 500; ++trial) {
        for (auto& f : def.fields) {
            f.required = rng() % 2;
        }
        ProcessingRules r;
        r.output_type = def.type_name;
        std::set<std::string> resolved;
        std::set<std::string> prompted;
        for (const auto& f : def.fields) {
            switch (pick(rng)) {
            case 0:
                r.rules.emplace_back(CopyRule{f.name, "medical-report", "name"});
                resolved.insert(f.name);
                break;
            case 1:
                r.rules.emplace_back(ConstRule{f.name, "v"});
                resolved.insert(f.name);
                break;
            case 2:
                r.rules.emplace_back(PromptRule{f.name, "L"});
                prompted.insert(f.name);
                break;
            default:
                break;
            }
        }
        std::shuffle(r.rules.begin(), r.rules.end(), rng);
        std::set<std::string> oracle = prompted;
        for (const auto& f : def.fields) {
            if (f.required && !resolved.contains(f.name)) oracle.insert(f.name);
        }
        std::set<std::string> got;
        for (const auto& p : plan_prompts(r, def)) {
            ASSERT_TRUE(got.insert(p.out_field).second);
        }
        ASSERT_EQ(got, oracle);
    }
}

TEST(Wysiwys, SignatureBindsDisplayedText) {
    Desk d;
    auto c = connect(d, d.viewer.ks);
    auto doc = rossi_doc();
    auto view = c.render({std::nullopt, doc}, "medical-report-it");
    std::string displayed;
    auto ks = d.physician.ks;
    auto signed_doc = wysiwys_sign(doc, view, ks, kPin, [&](const edoc::RenderedView& v) {
        displayed = v.text;
        return true;
    });
    ASSERT_EQ(signed_doc.signatures.size(), 1u);
    EXPECT_EQ(signed_doc.signatures[0].view->view_digest, crypto::sha256(displayed));
    EXPECT_EQ(signed_doc.signatures[0].view->stylesheet_id, "medical-report-it");
    EXPECT_TRUE(c.verify({std::nullopt, signed_doc}).all_valid);
}

TEST(Wysiwys, AbortLeavesKeystoreUntouched) {
    Desk d;
    auto doc = rossi_doc();
    auto view = edoc::render(doc, emr_sheet_it());
    auto ks = d.physician.ks;
    EXPECT_EQ(code_of([&] { (void)ks.open("0000"); }), errc::wrong_pin);
    ASSERT_EQ(ks.failure_counter(), 1);
    EXPECT_EQ(code_of([&] { (void)wysiwys_sign(doc, view, ks, kPin, [](const auto&) { return false; }); }),
              errc::user_abort);
    EXPECT_EQ(ks.failure_counter(), 1);
}

TEST(Wysiwys, DoctoredViewIsRefused) {
    Desk d;
    auto doc = rossi_doc();
    auto view = edoc::render(doc, emr_sheet_it());
    view.text += " ";
    auto ks = d.physician.ks;
    EXPECT_EQ(code_of([&] { (void)wysiwys_sign(doc, view, ks, kPin, kYes); }), errc::malformed);
}

TEST(Wysiwys, EditingAnyFieldBreaksTheBinding) {
    Desk d;
    auto c = connect(d, d.viewer.ks);
    auto doc = rossi_doc();
    auto ks = d.physician.ks;
    auto signed_doc = wysiwys_sign(doc, edoc::render(doc, emr_sheet_it()), ks, kPin, kYes);
    for (const auto& [name, value] : rossi_values()) {
        auto edited = signed_doc;
        edited.field_values[name] = value + "x";
        auto report = c.verify({std::nullopt, edited});
        EXPECT_FALSE(report.all_valid) << name;
        ASSERT_EQ(report.view_binding_checks.size(), 1u);
        EXPECT_FALSE(report.view_binding_checks[0].ok) << name;
    }
}

TEST(Viewer, LeastPrivilege) {
    Desk d;
    auto id = d.store_emr();
    auto v = connect(d, d.viewer.ks);
    EXPECT_NO_THROW((void)v.render({id, {}}, "medical-report-en"));
    EXPECT_EQ(verbatim_of([&] { (void)v.store_doc(d.signed_emr(d.physician)); }), "DENIED/COMMAND_NOT_ALLOWED");
    std::set<K> granted = {K::render_doc, K::verify_doc, K::get_doc};
    for (auto k : proto::kAllCommandKinds) {
        if (granted.contains(k)) continue;
        auto r = v.call(k, proto::empty_body());
        EXPECT_EQ(r.status, proto::Status::denied) << proto::to_string(k);
    }
}

TEST(Viewer, NotInstalledIsUnknownRole) {
    PlatformHarness h;
    h.bootstrap();
    Actor other_viewer("Viewer", "viewer");
    auto v = connect(h, other_viewer.ks);
    EXPECT_EQ(verbatim_of([&] { (void)v.render({"d1", {}}, "medical-report-en"); }), "DENIED/UNKNOWN_ROLE");
}
