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

#pragma once

#include "sda/crypto/keystore.hpp"
#include "sda/edoc/edoc.hpp"

#include <chrono>
#include <filesystem>
#include <map>
#include <random>
#include <string>

namespace sda::testing {

inline constexpr std::string_view kPin = "1234";

inline Timestamp at(int year, unsigned month, unsigned day, int hour = 9) {
    using namespace std::chrono;
    return Timestamp{sys_days{std::chrono::year{year} / month / day}} + hours{hour};
}

inline crypto::Validity long_validity() { return {at(2000, 1, 1), at(2099, 1, 1)}; }

/// A key pair plus a certificate for it, issued by `issuer` (self-signed when null).
struct Identity {
    crypto::KeyPair keys;
    crypto::RoleCertificate cert;

    [[nodiscard]] crypto::Fingerprint fp() const { return crypto::fingerprint(cert); }
    [[nodiscard]] crypto::SoftKeystore keystore(std::string_view pin = kPin) const {
        return crypto::SoftKeystore::in_memory(keys, cert, pin, crypto::KdfLimits::minimal());
    }
    [[nodiscard]] crypto::SoftKeystore keystore_file(const std::filesystem::path& path,
                                                     std::string_view pin = kPin) const {
        return crypto::SoftKeystore::provision(path, keys, cert, pin, crypto::KdfLimits::minimal());
    }
};

inline Identity make_identity(const std::string& subject, const std::string& role,
                              const Identity* issuer = nullptr) {
    auto keys = crypto::KeyPair::generate();
    auto cert = issuer ? crypto::issue_certificate(issuer->keys, &issuer->cert, keys.public_key(), subject, role,
                                                   long_validity())
                       : crypto::issue_certificate(keys, nullptr, keys.public_key(), subject, role,
                                                   long_validity());
    return Identity{std::move(keys), std::move(cert)};
}

inline edoc::DocTypeDefinition emr_definition(int version = 1) {
    using edoc::FieldKind;
    edoc::DocTypeDefinition def;
    def.type_name = "medical-report";
    def.version = version;
    def.fields = {
        {"name", FieldKind::string, {}, true, std::nullopt, "Name"},
        {"surname", FieldKind::string, {}, true, std::nullopt, "Surname"},
        {"visit_date", FieldKind::date, {}, true, std::nullopt, "Visit date"},
        {"exam_type", FieldKind::string, {}, true, std::nullopt, "Examination"},
        {"diagnosis", FieldKind::string, {}, true, std::nullopt, "Diagnosis"},
    };
    def.stylesheet_ids = {"medical-report-en", "medical-report-it"};
    return def;
}

inline edoc::DocTypeDefinition lab_order_definition() {
    using edoc::FieldKind;
    edoc::DocTypeDefinition def;
    def.type_name = "lab-order";
    def.version = 1;
    def.fields = {
        {"patient_code", FieldKind::string, {}, true, std::nullopt, "Patient"},
        {"test", FieldKind::enumeration, {"blood", "urine"}, true, std::string("blood"), "Test"},
        {"priority", FieldKind::integer, {}, false, std::string("1"), "Priority"},
    };
    return def;
}

inline edoc::Stylesheet emr_sheet_en() {
    return {"medical-report-en", "medical-report", "en",
            "Medical report\nPatient: {field:surname} {field:name}\nVisit date: {field:visit_date}\n"
            "Examination: {field:exam_type}\nDiagnosis: {field:diagnosis}\n"};
}

inline edoc::Stylesheet emr_sheet_it() {
    return {"medical-report-it", "medical-report", "it",
            "Referto medico\nPaziente: {field:surname} {field:name}\nData della visita: {field:visit_date}\n"
            "Esame: {field:exam_type}\nDiagnosi: {field:diagnosis}\n"};
}

inline edoc::Stylesheet lab_sheet() {
    return {"lab-order-en", "lab-order", "en", "Lab order for {field:patient_code}: {field:test}"};
}

inline std::map<std::string, std::string> rossi_values() {
    return {{"name", "Anna"},
            {"surname", "Rossi"},
            {"visit_date", "2002-05-21"},
            {"exam_type", "Doppler"},
            {"diagnosis", "No stenosis of the carotid arteries."}};
}

inline edoc::EDoc rossi_doc() { return edoc::create_doc(emr_definition(), rossi_values(), at(2002, 5, 21, 10)); }

/// Random text over a deliberately hostile alphabet (markup characters,
/// whitespace, CR, accents in composed and decomposed form, astral plane).
inline std::string random_text(std::mt19937_64& rng, std::size_t max_len = 12) {
    static const char* kPieces[] = {"a", "Z", "0", " ", "\t", "\n", "\r", "&", "<", ">", "\"", "'",
                                    "é", "e\xCC\x81", "ß", "\xE2\x82\xAC", "\xF0\x9F\x98\x80", "{", "}", ";"};
    std::uniform_int_distribution<std::size_t> len(0, max_len);
    std::uniform_int_distribution<std::size_t> pick(0, std::size(kPieces) - 1);
    std::string out;
    for (std::size_t n = len(rng); n > 0; --n) {
        out += kPieces[pick(rng)];
    }
    return out;
}

inline std::string random_name(std::mt19937_64& rng) {
    static const char* kNames[] = {"a", "b", "field", "x-1", "y.z", "_q", "node", "Value"};
    return kNames[std::uniform_int_distribution<std::size_t>(0, std::size(kNames) - 1)(rng)];
}

} // namespace sda::testing
