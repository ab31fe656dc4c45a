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

#include "sda/medreg/service.hpp"

#include "sda/crypto/hash.hpp"

namespace sda::medreg {

std::string content_digest(const edoc::EDoc& doc) { return crypto::sha256(edoc::content_bytes(doc)).hex(); }

std::map<std::string, std::string> emr_fields(const VisitRecord& v) {
    return {{"name", v.patient.name},
            {"surname", v.patient.surname},
            {"visit_date", v.visit_date},
            {"exam_type", v.exam_type},
            {"diagnosis", v.diagnosis.value_or("")}};
}

MedregService::MedregService(MasterDb& db, std::unique_ptr<client::Client> platform, ServiceOptions options,
                             Clock clock)
    : db_(db), platform_(std::move(platform)), options_(std::move(options)), clock_(std::move(clock)) {}

template <typename Fn>
auto MedregService::on_platform(Fn&& fn) -> decltype(fn(std::declval<client::Client&>())) {
    std::lock_guard lock(platform_mutex_);
    try {
        return fn(*platform_);
    } catch (const client::PlatformError&) {
        throw;
    } catch (const error& e) {
        switch (e.code()) {
        case errc::unreachable:
        case errc::gateway_unreachable:
        case errc::gateway_bad_response:
            throw error(errc::platform_unavailable, e.what());
        default:
            throw;
        }
    }
}

void MedregService::require(const Principal& who, std::initializer_list<PrincipalRole> roles,
                            const char* action) const {
    for (auto r : roles) {
        if (who.role == r) return;
    }
    throw error(errc::denied, std::string(to_string(who.role)) + " '" + who.id + "' may not " + action);
}

std::string MedregService::register_visit(const Principal& who, const NewVisit& visit) {
    require(who, {PrincipalRole::registrar}, "register visits");
    return db_.register_visit(visit);
}

std::vector<VisitRecord> MedregService::worklist(const Principal& who, const std::string& date) {
    return db_.visits_on(date, who.role == PrincipalRole::physician ? who.id : std::string());
}

Snapshot MedregService::checkout(const Principal& who, const std::string& date) {
    require(who, {PrincipalRole::physician}, "check out a worklist");
    require_date(date);
    return db_.checkout(who.id, date, clock_(), options_.lease_ttl);
}

std::vector<PushResult> MedregService::sync(const Principal& who, const std::vector<PushItem>& items) {
    require(who, {PrincipalRole::physician}, "push diagnoses");
    return db_.push(who.id, items, clock_());
}

std::vector<HistoryEntry> MedregService::history(const Principal&, const std::string& patient_code) {
    return db_.history(patient_code);
}

GeneratedEmr MedregService::generate_emr(const Principal& who, const std::string& visit_id) {
    require(who, {PrincipalRole::physician}, "generate e-MRs");
    auto v = db_.require_visit(visit_id);
    if (v.physician_id != who.id) throw error(errc::denied, visit_id + " is assigned to " + v.physician_id);
    if (v.status == VisitStatus::processed) throw error(errc::already_processed, visit_id);
    if (v.status != VisitStatus::diagnosed) throw error(errc::not_diagnosed, visit_id + " has no synced diagnosis");
    return on_platform([&](client::Client& c) {
        auto doc = c.create_doc(options_.emr_type, emr_fields(v));
        auto view = c.render({std::nullopt, doc}, options_.sign_stylesheet, locale_for(options_.sign_stylesheet));
        db_.record_pending_emr(visit_id, content_digest(doc), clock_());
        return GeneratedEmr{visit_id, std::move(doc), std::move(view)};
    });
}

StoredEmr MedregService::store_signed_emr(const Principal& who, const edoc::EDoc& signed_doc) {
    require(who, {PrincipalRole::physician}, "store e-MRs");
    auto cert = crypto::certificate_from_xml(xml::parse(who.certificate_xml));
    auto fp = crypto::fingerprint(cert);
    if (signed_doc.signatures.empty()) throw error(errc::bad_signature, "the e-MR carries no signature");
    auto content = edoc::content_bytes(signed_doc);
    bool signed_by_session = false;
    for (const auto& block : signed_doc.signatures) {
        if (block.signer_fingerprint != fp) continue;
        auto report = crypto::verify_signature(cert, content, block);
        if (!report.valid) throw error(errc::bad_signature, std::string(crypto::to_string(report.reason)));
        signed_by_session = true;
    }
    if (!signed_by_session) {
        throw error(errc::signer_mismatch, "no signature by " + who.id + " (" + fp.hex() + ")");
    }

    std::lock_guard lock(store_mutex_);
    auto digest = content_digest(signed_doc);
    auto visit_id = db_.pending_visit_for(digest);
    if (!visit_id) throw error(errc::emr_mismatch, "the e-MR was not generated by this service");
    auto v = db_.require_visit(*visit_id);
    if (v.physician_id != who.id) throw error(errc::signer_mismatch, *visit_id + " is assigned to " + v.physician_id);
    if (auto link = db_.emr_link(*visit_id)) {
        if (link->content_digest == digest) return {*visit_id, link->doc_id, true};
        throw error(errc::already_processed, *visit_id + " already has e-MR " + link->doc_id);
    }
    if (v.status != VisitStatus::diagnosed) throw error(errc::not_diagnosed, *visit_id);
    if (signed_doc.type_name != options_.emr_type || signed_doc.field_values != emr_fields(v)) {
        throw error(errc::emr_mismatch, "e-MR fields differ from the current record of " + *visit_id);
    }

    auto doc_id = on_platform([&](client::Client& c) -> std::string {
        // A previous attempt may have reached the platform but not the master store.
        proto::SearchQuery q{options_.emr_type, {{"visit_id", *visit_id}}};
        for (const auto& hit : c.search(q)) {
            if (content_digest(c.get_doc(hit.doc_id)) == digest) return hit.doc_id;
        }
        auto doc = signed_doc;
        doc.attributes["state"] = "processed";
        doc.attributes["partition"] = "output";
        doc.attributes["patient_code"] = v.patient.patient_code;
        doc.attributes["visit_id"] = *visit_id;
        return c.store_doc(doc);
    });
    db_.mark_processed(*visit_id, digest, doc_id);
    return {*visit_id, doc_id, false};
}

std::optional<std::string> MedregService::locale_for(const std::optional<std::string>& stylesheet) const {
    if (stylesheet || options_.locale) return options_.locale;
    return std::string(kDefaultLocale);
}

PrintedEmr MedregService::print_emr(const Principal&, const std::string& doc_id) {
    auto sheet = options_.print_stylesheet ? options_.print_stylesheet : options_.sign_stylesheet;
    return on_platform([&](client::Client& c) {
        return PrintedEmr{doc_id, c.render({doc_id, std::nullopt}, sheet, locale_for(sheet))};
    });
}

} // namespace sda::medreg
