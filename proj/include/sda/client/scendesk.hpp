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

/**
 * @file scendesk.hpp
 * @brief Processing rules: compose an output doc from input docs plus answers.
 *
 * Rules file:
 * @code
 *   <rules output="discharge-letter" mark-attribute="state" mark-value="processed">
 *     <copy field="name" from-type="medical-report" from-field="name"/>
 *     <const field="clinic" value="Angiology"/>
 *     <prompt field="summary" label="Summary"/>
 *   </rules>
 * @endcode
 * `output-version` pins a definition version; the latest is used otherwise.
 */

#pragma once

#include "sda/client/client.hpp"
#include "sda/client/wysiwys.hpp"

#include <filesystem>
#include <variant>

namespace sda::client {

struct CopyRule {
    std::string out_field;
    std::string input_type;
    std::string input_field;
};
struct ConstRule {
    std::string out_field;
    std::string value;
};
struct PromptRule {
    std::string out_field;
    std::string label;
};
using Rule = std::variant<CopyRule, ConstRule, PromptRule>;

struct ProcessingRules {
    std::string output_type;
    std::optional<int> output_version;
    std::vector<Rule> rules;
    std::string mark_attribute = "state";
    std::string mark_value = "processed";
};

struct PromptRequest {
    std::string out_field;
    std::string label;
    edoc::FieldKind kind = edoc::FieldKind::string;
    bool operator==(const PromptRequest&) const = default;
};

/// Throws error(unresolved_fields); the detail lists the fields, comma-separated.
class UnresolvedFields : public error {
public:
    explicit UnresolvedFields(std::vector<PromptRequest> prompts);
    [[nodiscard]] const std::vector<PromptRequest>& prompts() const noexcept { return prompts_; }

private:
    std::vector<PromptRequest> prompts_;
};

[[nodiscard]] const std::string& out_field(const Rule& r);
[[nodiscard]] ProcessingRules rules_from_xml(const xml::Element& e);
[[nodiscard]] xml::Element to_xml(const ProcessingRules& rules);
[[nodiscard]] ProcessingRules load_rules(const std::filesystem::path& path);

/// Output field uniqueness, output fields exist, copy sources exist in the
/// latest definition of their input type. Throws error(validation_failed).
void check_rules(const ProcessingRules& rules, const proto::TypeCatalog& catalog);

/// Output definition the rules target. Throws error(unknown_type).
[[nodiscard]] const edoc::DocTypeDefinition& output_definition(const ProcessingRules& rules,
                                                               const proto::TypeCatalog& catalog);

/// Phase 1: required fields not filled by copy/const, plus every prompt rule, in definition order.
[[nodiscard]] std::vector<PromptRequest> plan_prompts(const ProcessingRules& rules,
                                                      const edoc::DocTypeDefinition& output);

/// Pure composition. Copy rules take the first input of the named type that
/// has the field. Throws UnresolvedFields, error(missing_input), or edoc::ValidationError.
[[nodiscard]] edoc::EDoc compose_output(const ProcessingRules& rules, const edoc::DocTypeDefinition& output,
                                        const std::vector<edoc::EDoc>& inputs,
                                        const std::map<std::string, std::string>& answers, Timestamp created_at);

struct ComposeResult {
    std::string output_doc_id;
    edoc::EDoc output;
    std::vector<std::string> marked;  ///< inputs whose mark attribute was set
};

/// Steps completed before a failure in phase 2.
class ComposeFailed : public error {
public:
    ComposeFailed(const error& cause, std::optional<std::string> output_doc_id, std::vector<std::string> marked);
    [[nodiscard]] errc cause() const noexcept { return code(); }
    [[nodiscard]] const std::optional<std::string>& output_doc_id() const noexcept { return output_doc_id_; }
    [[nodiscard]] const std::vector<std::string>& marked() const noexcept { return marked_; }

private:
    std::optional<std::string> output_doc_id_;
    std::vector<std::string> marked_;
};

/// Phase 2: fetch inputs, compose, render with `stylesheet_id` (or the output
/// type's `locale` sheet), review-and-sign, store, then mark each input.
/// Failures before the store throw the original error; later failures throw
/// ComposeFailed with the progress made.
[[nodiscard]] ComposeResult scendesk_compose(Client& client, const ProcessingRules& rules,
                                             const std::vector<std::string>& input_ids,
                                             const std::map<std::string, std::string>& answers,
                                             crypto::SoftKeystore& keystore, std::string_view pin,
                                             const Confirm& confirm,
                                             const std::optional<std::string>& stylesheet_id,
                                             const std::optional<std::string>& locale,
                                             Timestamp now = system_now());

} // namespace sda::client
