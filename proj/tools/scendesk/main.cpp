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

// scendesk: compose an output document from processed inputs under a rules file.

#include "../support/cli.hpp"

#include "sda/client/scendesk.hpp"

#include <iostream>

using namespace sda;

namespace {

struct ComposeArgs {
    std::string rules;
    std::vector<std::string> inputs;
    std::vector<std::string> answers;
    std::string stylesheet;
    std::string locale;
    bool dry_run = false;
    bool yes = false;
};

std::optional<std::string> non_empty(const std::string& s) {
    return s.empty() ? std::nullopt : std::optional<std::string>(s);
}

/// Asks on the terminal for every prompt not already answered.
void ask_missing(const std::vector<client::PromptRequest>& prompts, std::map<std::string, std::string>& answers) {
    std::vector<client::PromptRequest> missing;
    for (const auto& p : prompts) {
        if (!answers.contains(p.out_field)) missing.push_back(p);
    }
    if (missing.empty()) return;
    if (!cli::stdin_is_terminal()) throw client::UnresolvedFields(missing);
    for (const auto& p : missing) {
        answers[p.out_field] = cli::read_line(p.label + " [" + std::string(edoc::to_string(p.kind)) + "]: ");
    }
}

int dry_run(client::Client& client, const client::ProcessingRules& rules, const ComposeArgs& a,
            const std::map<std::string, std::string>& answers) {
    auto catalog = client.list_types();
    client::check_rules(rules, catalog);
    const auto& output = client::output_definition(rules, catalog);
    auto prompts = client::plan_prompts(rules, output);
    bool complete = true;
    for (const auto& p : prompts) {
        bool given = answers.contains(p.out_field);
        complete = complete && given;
        std::cout << "prompt " << p.out_field << " (" << p.label << ") " << (given ? "answered" : "MISSING") << '\n';
    }
    if (!complete) return cli::kExitOk;
    std::vector<edoc::EDoc> inputs;
    for (const auto& id : a.inputs) inputs.push_back(client.get_doc(id));
    auto doc = client::compose_output(rules, output, inputs, answers, system_now());
    std::cout << edoc::content_bytes(doc) << '\n' << "dry run: nothing stored, no input marked\n";
    return cli::kExitOk;
}

int compose(const cli::Connection& conn, const ComposeArgs& a) {
    auto rules = client::load_rules(a.rules);
    auto answers = cli::parse_assignments(a.answers);
    auto pin = cli::read_pin("PIN: ");
    auto keystore = crypto::SoftKeystore::load(conn.keystore);
    auto client = cli::open_client(conn, conn.keystore, pin);
    if (a.dry_run) return dry_run(client, rules, a, answers);
    auto catalog = client.list_types();
    ask_missing(client::plan_prompts(rules, client::output_definition(rules, catalog)), answers);
    try {
        auto result = client::scendesk_compose(
            client, rules, a.inputs, answers, keystore, pin,
            [&](const edoc::RenderedView& view) { return cli::review(view, a.yes); }, non_empty(a.stylesheet),
            non_empty(a.locale));
        std::cout << "stored " << result.output_doc_id << '\n';
        for (const auto& id : result.marked) std::cout << "marked " << id << ' ' << rules.mark_value << '\n';
    } catch (const client::ComposeFailed& e) {
        if (e.output_doc_id()) std::cerr << "stored " << *e.output_doc_id() << " before the failure\n";
        for (const auto& id : e.marked()) std::cerr << "marked " << id << " before the failure\n";
        throw;
    }
    return cli::kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Scenario desk: rule-driven document composition"};
    app.require_subcommand(1);
    cli::Connection conn;
    add_connection_options(app, conn);

    ComposeArgs a;
    auto* cmd = app.add_subcommand("compose", "Compose, review, sign and store an output document");
    cmd->add_option("--rules", a.rules, "Processing rules file")->required()->check(CLI::ExistingFile);
    cmd->add_option("--inputs", a.inputs, "Input doc ids")->required();
    cmd->add_option("--answer", a.answers, "Prompt answer as field=value (repeatable)");
    auto* sheet = cmd->add_option("--stylesheet", a.stylesheet, "Stylesheet for the review");
    cmd->add_option("--locale", a.locale, "Pick the output type's stylesheet for this locale")->excludes(sheet);
    cmd->add_flag("--dry-run", a.dry_run, "Check rules and show the composed content; store nothing");
    cmd->add_flag("--yes", a.yes, "Sign without typing the confirmation code");

    if (auto rc = cli::parse(app, argc, argv)) return *rc;
    return cli::guarded([&] { return compose(conn, a); });
}
