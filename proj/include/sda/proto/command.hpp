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
 * @file command.hpp
 * @brief The closed command vocabulary.
 */

#pragma once

#include <array>
#include <string_view>

namespace sda::proto {

enum class CommandKind {
    install_definition,
    install_stylesheet,
    install_role,
    revoke_role,
    create_doc,
    store_doc,
    get_doc,
    search_docs,
    render_doc,
    verify_doc,
    set_attribute,
    get_attribute,
    list_types,
    status,
    start_port,
    stop_port,
};

inline constexpr std::array<CommandKind, 16> kAllCommandKinds = {
    CommandKind::install_definition, CommandKind::install_stylesheet, CommandKind::install_role,
    CommandKind::revoke_role,        CommandKind::create_doc,         CommandKind::store_doc,
    CommandKind::get_doc,            CommandKind::search_docs,        CommandKind::render_doc,
    CommandKind::verify_doc,         CommandKind::set_attribute,      CommandKind::get_attribute,
    CommandKind::list_types,         CommandKind::status,             CommandKind::start_port,
    CommandKind::stop_port,
};

/// Wire spelling, e.g. "GET_DOC".
[[nodiscard]] std::string_view to_string(CommandKind kind) noexcept;
/// Throws error(unknown_command).
[[nodiscard]] CommandKind parse_command_kind(std::string_view text);

/// Role-map and port administration; accepted from the role-set identity only.
[[nodiscard]] bool is_admin_kind(CommandKind kind) noexcept;
/// Changes persistent platform state.
[[nodiscard]] bool is_mutating(CommandKind kind) noexcept;

} // namespace sda::proto
