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

#include "sda/crypto/certificate.hpp"
#include "sda/crypto/keystore.hpp"
#include "sda/crypto/signature.hpp"
#include "sda/common/files.hpp"

#include "fixtures.hpp"

#include <gtest/gtest.h>
#include <openssl/sha.h>

#include <filesystem>

using namespace sda;
using namespace sda::crypto;
using sda::testing::make_identity;

namespace {

// Independent re-implementation of the certificate encoding: string
// concatenation in canonical order, hashed with OpenSSL.
std::string oracle_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string oracle_fingerprint(const RoleCertificate& c) {
    std::string enc = "<certificate version=\"1\">";
    enc += "<serial>" + oracle_escape(c.serial) + "</serial>";
    enc += "<subject>" + oracle_escape(c.subject_name) + "</subject>";
    enc += "<role>" + oracle_escape(c.role_name) + "</role>";
    enc += "<public-key alg=\"ed25519\">" + to_base64(Bytes(c.public_key.begin(), c.public_key.end())) +
           "</public-key>";
    enc += "<issuer>" + (c.issuer_fingerprint ? c.issuer_fingerprint->hex() : std::string()) + "</issuer>";
    enc += "<not-before>" + format_timestamp(c.not_before) + "</not-before>";
    enc += "<not-after>" + format_timestamp(c.not_after) + "</not-after>";
    enc += "<signature>" + to_base64(Bytes(c.issuer_signature.begin(), c.issuer_signature.end())) +
           "</signature>";
    enc += "</certificate>";
    unsigned char md[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(enc.data()), enc.size(), md);
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned char b : md) {
        out += hex[b >> 4];
        out += hex[b & 0xF];
    }
    return out;
}

errc code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const sda::error& e) {
        return e.code();
    }
    return errc::internal;
}

} // namespace

TEST(KeyPair, SignVerifyRoundTripAndFreshKeys) {
    auto a = KeyPair::generate();
    auto b = KeyPair::generate();
    EXPECT_NE(a.public_key(), b.public_key());
    EXPECT_TRUE(verify_detached(a.public_key(), "m", a.sign("m")));
}

TEST(KeyPair, HundredPairsCrossVerificationOnlyDiagonal) {
    std::vector<KeyPair> pairs;
    std::vector<SignatureValue> sigs;
    for (int i = 0; i < 100; ++i) {
        pairs.push_back(KeyPair::generate());
        sigs.push_back(pairs.back().sign("m"));
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        for (std::size_t j = 0; j < pairs.size(); ++j) {
            ASSERT_EQ(verify_detached(pairs[j].public_key(), "m", sigs[i]), i == j);
        }
    }
}

TEST(Certificate, SelfSignedRoleSetCertificate) {
    auto admin = make_identity("Role Administrator", "role-set");
    EXPECT_TRUE(admin.cert.self_signed());
    EXPECT_FALSE(admin.cert.issuer_fingerprint.has_value());
    EXPECT_TRUE(verify_self_signed(admin.cert));
}

TEST(Certificate, DegenerateValidityRejected) {
    auto keys = KeyPair::generate();
    auto t = sda::testing::at(2002, 5, 21);
    EXPECT_EQ(code_of([&] { (void)issue_certificate(keys, nullptr, keys.public_key(), "x", "y", {t, t}); }),
              errc::invalid_validity);
}

TEST(Certificate, IssuedCertificateChainVerifies) {
    auto admin = make_identity("Role Administrator", "role-set");
    auto definer = make_identity("Definer", "definer", &admin);
    EXPECT_TRUE(verify_issued_by(definer.cert, admin.cert));
    EXPECT_FALSE(verify_self_signed(definer.cert));
    auto other = make_identity("Other admin", "role-set");
    EXPECT_FALSE(verify_issued_by(definer.cert, other.cert));
}

TEST(Certificate, XmlRoundTripAndFile) {
    auto admin = make_identity("Role <Administrator> & co", "role-set");
    EXPECT_EQ(certificate_from_xml(xml::parse(canonical_bytes(admin.cert))), admin.cert);
    auto path = std::filesystem::temp_directory_path() / "sda_cert_test.cert.xml";
    save_certificate(path, admin.cert);
    EXPECT_EQ(load_certificate(path), admin.cert);
    std::filesystem::remove(path);
}

TEST(Fingerprint, DeterministicSensitiveAndMatchesOracle) {
    auto admin = make_identity("Role \"Admin\" <x>", "role-set");
    auto fp = fingerprint(admin.cert);
    EXPECT_EQ(fp.hex().size(), 64u);
    EXPECT_EQ(fp, fingerprint(admin.cert));
    EXPECT_EQ(fp.hex(), oracle_fingerprint(admin.cert));

    auto changed = admin.cert;
    changed.role_name = "role-sex";
    EXPECT_NE(fingerprint(changed), fp);
    EXPECT_EQ(fingerprint(changed).hex(), oracle_fingerprint(changed));

    auto issued = make_identity("Definer", "definer", &admin);
    EXPECT_EQ(fingerprint(issued.cert).hex(), oracle_fingerprint(issued.cert));
}

TEST(SignBytes, CorrectPinVerifies) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    auto block = sign_bytes(ks, sda::testing::kPin, "content");
    auto report = verify_signature(phys.cert, "content", block);
    EXPECT_TRUE(report.valid);
    EXPECT_EQ(report.reason, VerifyReason::ok);
}

TEST(SignBytes, ThreeWrongPinsLockAndCorrectPinThenRefused) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    EXPECT_EQ(code_of([&] { (void)sign_bytes(ks, "0000", "m"); }), errc::wrong_pin);
    EXPECT_EQ(code_of([&] { (void)sign_bytes(ks, "0000", "m"); }), errc::wrong_pin);
    EXPECT_EQ(code_of([&] { (void)sign_bytes(ks, "0000", "m"); }), errc::locked_after_this_attempt);
    EXPECT_TRUE(ks.locked());
    EXPECT_EQ(code_of([&] { (void)sign_bytes(ks, sda::testing::kPin, "m"); }), errc::keystore_locked);
}

TEST(SignBytes, TwoWrongThenCorrectResetsCounter) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    (void)code_of([&] { (void)sign_bytes(ks, "0000", "m"); });
    (void)code_of([&] { (void)sign_bytes(ks, "0000", "m"); });
    EXPECT_EQ(ks.failure_counter(), 2);
    EXPECT_NO_THROW((void)sign_bytes(ks, sda::testing::kPin, "m"));
    EXPECT_EQ(ks.failure_counter(), 0);
    EXPECT_FALSE(ks.locked());
}

TEST(SoftKeystore, LockoutPersistsInKeyFile) {
    auto dir = std::filesystem::temp_directory_path() / "sda_keystore_test";
    std::filesystem::create_directories(dir);
    auto path = dir / "dr.keystore.xml";
    auto phys = make_identity("Dr Pillon", "physician");
    {
        auto ks = phys.keystore_file(path);
        (void)code_of([&] { (void)ks.open("bad"); });
        (void)code_of([&] { (void)ks.open("bad"); });
    }
    auto reloaded = SoftKeystore::load(path);
    EXPECT_EQ(reloaded.failure_counter(), 2);
    EXPECT_EQ(code_of([&] { (void)reloaded.open("bad"); }), errc::locked_after_this_attempt);
    EXPECT_TRUE(SoftKeystore::load(path).locked());
    EXPECT_EQ(SoftKeystore::load(path).certificate(), phys.cert);
    std::filesystem::remove_all(dir);
}

TEST(SoftKeystore, FileNeverContainsThePlainSecret) {
    auto dir = std::filesystem::temp_directory_path() / "sda_keystore_secret";
    std::filesystem::create_directories(dir);
    auto phys = make_identity("Dr Pillon", "physician");
    (void)phys.keystore_file(dir / "k.xml");
    auto text = read_file(dir / "k.xml");
    EXPECT_EQ(text.find(to_base64(phys.keys.export_secret())), std::string::npos);
    EXPECT_EQ(text.find(to_hex(phys.keys.export_secret())), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(VerifySignature, FlippedByteIsDigestMismatch) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    std::string content = "diagnosis: fine";
    auto block = sign_bytes(ks, sda::testing::kPin, content);
    content[3] ^= 0x01;
    auto report = verify_signature(phys.cert, content, block);
    EXPECT_FALSE(report.valid);
    EXPECT_EQ(report.reason, VerifyReason::digest_mismatch);
}

TEST(VerifySignature, TamperedSignedInfoIsBadSignature) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    auto block = sign_bytes(ks, sda::testing::kPin, "x", ViewBinding{"sheet", sha256("view")});
    block.view->stylesheet_id = "other";
    EXPECT_EQ(verify_signature(phys.cert, "x", block).reason, VerifyReason::bad_signature);
}

TEST(VerifySignature, TenByTenCrossPairOnlyDiagonal) {
    std::vector<sda::testing::Identity> ids;
    std::vector<SignatureBlock> blocks;
    for (int i = 0; i < 10; ++i) {
        ids.push_back(make_identity("role" + std::to_string(i), "r"));
        auto ks = ids.back().keystore();
        blocks.push_back(sign_bytes(ks, sda::testing::kPin, "shared content"));
    }
    for (std::size_t c = 0; c < ids.size(); ++c) {
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            auto report = verify_signature(ids[c].cert, "shared content", blocks[b]);
            ASSERT_EQ(report.valid, c == b);
            if (c != b) {
                ASSERT_EQ(report.reason, VerifyReason::fingerprint_mismatch);
            }
        }
    }
}

TEST(SignatureBlock, XmlRoundTrip) {
    auto phys = make_identity("Dr Pillon", "physician");
    auto ks = phys.keystore();
    auto plain = sign_bytes(ks, sda::testing::kPin, "x");
    auto bound = sign_bytes(ks, sda::testing::kPin, "x", ViewBinding{"medical-report-it", sha256("text")});
    EXPECT_EQ(signature_from_xml(xml::parse(xml::canonicalize(to_xml(plain)))), plain);
    EXPECT_EQ(signature_from_xml(xml::parse(xml::canonicalize(to_xml(bound)))), bound);
}
