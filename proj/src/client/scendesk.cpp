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

#include "sda/client/scendesk.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"

#include <set>

namespace sda::client {

namespace {

std::string field_list(const std::vector<PromptRequest>& prompts) {
    std::string out;
    for (const auto& p : prompts) {
        if (!out.empty()) out += ",";
        out += p.out_field;
    }
    return out;
}

const edoc::DocTypeDefinition* latest_in(const proto::TypeCatalog& catalog, const std::string& type) {
    const edoc::DocTypeDefinition* best = nullptr;
    for (const auto& d : catalog.definitions) {
        if (d.type_name == type && (!best || d.version > best->version)) best = &d;
    }
    return best;
}

} // namespace

UnresolvedFields::UnresolvedFields(std::vector<PromptRequest> prompts)
    : error(errc::unresolved_fields, field_list(prompts)), prompts_(std::move(prompts)) {}

ComposeFailed::ComposeFailed(const error& cause, std::optional<std::string> output_doc_id,
                             std::vector<std::string> marked)
    : error(cause.code(), cause.detail()), output_doc_id_(std::move(output_doc_id)), marked_(std::move(marked)) {}

const std::string& out_field(const Rule& r) {
    return std::visit([](const auto& x) -> const std::string& { return x.out_field; }, r);
}

ProcessingRules rules_from_xml(const xml::Element& e) {
    if (e.name() != "rules") throw error(errc::malformed, "expected <rules>");
    ProcessingRules r;
    r.output_type = e.required_attr("output");
    if (auto v = e.attr("output-version")) {
        try {
            r.output_version = std::stoi(*v);
        } catch (const std::exception&) {
            throw error(errc::malformed, "bad output-version " + *v);
        }
    }
    r.mark_attribute = e.attr("mark-attribute").value_or("state");
    r.mark_value = e.attr("mark-value").value_or("processed");
    for (const auto& c : e.children()) {
        if (c.name() == "copy") {
            r.rules.emplace_back(CopyRule{c.required_attr("field"), c.required_attr("from-type"),
                                          c.attr("from-field").value_or(c.required_attr("field"))});
        } else if (c.name() == "const") {
            r.rules.emplace_back(ConstRule{c.required_attr("field"), c.required_attr("value")});
        } else if (c.name() == "prompt") {
            r.rules.emplace_back(PromptRule{c.required_attr("field"), c.attr("label").value_or(c.required_attr("field"))});
        } else {
            throw error(errc::malformed, "unknown rule <" + c.name() + ">");
        }
    }
    return r;
}

xml::Element to_xml(const ProcessingRules& rules) {
    xml::Element e{"rules"};
    e.set("output", rules.output_type);
    if (rules.output_version) e.set("output-version", std::to_string(*rules.output_version));
    e.set("mark-attribute", rules.mark_attribute);
    e.set("mark-value", rules.mark_value);
    for (const auto& r : rules.rules) {
        if (const auto* c = std::get_if<CopyRule>(&r)) {
            auto& x = e.add(xml::Element{"copy"});
            x.set("field", c->out_field);
            x.set("from-type", c->input_type);
            x.set("from-field", c->input_field);
        } else if (const auto* k = std::get_if<ConstRule>(&r)) {
            auto& x = e.add(xml::Element{"const"});
            x.set("field", k->out_field);
            x.set("value", k->value);
        } else {
            const auto& p = std::get<PromptRule>(r);
            auto& x = e.add(xml::Element{"prompt"});
            x.set("field", p.out_field);
            x.set("label", p.label);
        }
    }
    return e;
}

ProcessingRules load_rules(const std::filesystem::path& path) { return rules_from_xml(xml::parse(read_file(path))); }

const edoc::DocTypeDefinition& output_definition(const ProcessingRules& rules, const proto::TypeCatalog& catalog) {
    if (!rules.output_version) {
        if (const auto* d = latest_in(catalog, rules.output_type)) return *d;
    } else {
        for (const auto& d : catalog.definitions) {
            if (d.type_name == rules.output_type && d.version == *rules.output_version) return d;
        }
    }
    throw error(errc::unknown_type, rules.output_type);
}

void check_rules(const ProcessingRules& rules, const proto::TypeCatalog& catalog) {
    const auto& out = output_definition(rules, catalog);
    std::set<std::string> seen;
    for (const auto& r : rules.rules) {
        const auto& f = out_field(r);
        if (!seen.insert(f).second) throw error(errc::validation_failed, "field has two rules: " + f);
        if (!out.field(f)) throw error(errc::validation_failed, "no field " + f + " in " + out.type_name);
        if (const auto* c = std::get_if<CopyRule>(&r)) {
            const auto* in = latest_in(catalog, c->input_type);
            if (!in) throw error(errc::validation_failed, "unknown input type " + c->input_type);
            if (!in->field(c->input_field)) {
                throw error(errc::validation_failed, "no field " + c->input_field + " in " + c->input_type);
            }
        }
    }
}

std::vector<PromptRequest> plan_prompts(const ProcessingRules& rules, const edoc::DocTypeDefinition& output) {
    std::map<std::string, const Rule*> by_field;
    for (const auto& r : rules.rules) {
        by_field[out_field(r)] = &r;
    }
    std::vector<PromptRequest> prompts;
    for (const auto& f : output.fields) {
        auto it = by_field.find(f.name);
        if (it == by_field.end()) {
            if (f.required) prompts.push_back({f.name, f.form_label.empty() ? f.name : f.form_label, f.kind});
        } else if (const auto* p = std::get_if<PromptRule>(it->second)) {
            prompts.push_back({f.name, p->label, f.kind});
        }
    }
    return prompts;
}

edoc::EDoc compose_output(const ProcessingRules& rules, const edoc::DocTypeDefinition& output,
                          const std::vector<edoc::EDoc>& inputs, const std::map<std::string, std::string>& answers,
                          Timestamp created_at) {
    std::map<std::string, std::string> values;
    for (const auto& r : rules.rules) {
        if (const auto* c = std::get_if<CopyRule>(&r)) {
            bool found = false;
            for (const auto& in : inputs) {
                if (in.type_name != c->input_type) continue;
                auto it = in.field_values.find(c->input_field);
                if (it == in.field_values.end()) continue;
                values[c->out_field] = it->second;
                found = true;
                break;
            }
            if (!found) throw error(errc::missing_input, c->input_type + "." + c->input_field);
        } else if (const auto* k = std::get_if<ConstRule>(&r)) {
            values[k->out_field] = k->value;
        }
    }
    std::vector<PromptRequest> unresolved;
    for (const auto& p : plan_prompts(rules, output)) {
        auto it = answers.find(p.out_field);
        if (it == answers.end()) {
            unresolved.push_back(p);
        } else {
            values[p.out_field] = it->second;
        }
    }
    if (!unresolved.empty()) throw UnresolvedFields(std::move(unresolved));
    return edoc::create_doc(output, values, created_at);
}

ComposeResult scendesk_compose(Client& client, const ProcessingRules& rules, const std::vector<std::string>& input_ids,
                               const std::map<std::string, std::string>& answers, crypto::SoftKeystore& keystore,
                               std::string_view pin, const Confirm& confirm,
                               const std::optional<std::string>& stylesheet_id,
                               const std::optional<std::string>& locale, Timestamp now) {
    auto catalog = client.list_types();
    check_rules(rules, catalog);
    const auto& output = output_definition(rules, catalog);
    std::vector<edoc::EDoc> inputs;
    for (const auto& id : input_ids) {
        inputs.push_back(client.get_doc(id));
    }
    auto doc = compose_output(rules, output, inputs, answers, now);
    auto view = client.render({std::nullopt, doc}, stylesheet_id, stylesheet_id ? std::nullopt : locale);
    ComposeResult result;
    result.output = wysiwys_sign(std::move(doc), view, keystore, pin, confirm, now);
    result.output_doc_id = client.store_doc(result.output);
    result.output.doc_id = result.output_doc_id;
    for (const auto& id : input_ids) {
        try {
            client.set_attribute(id, rules.mark_attribute, rules.mark_value);
        } catch (const error& e) {
            throw ComposeFailed(e, result.output_doc_id, result.marked);
        }
        result.marked.push_back(id);
    }
    return result;
}

} // namespace sda::client
