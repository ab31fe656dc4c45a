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

#include "sda/proto/command.hpp"

#include "sda/common/error.hpp"

#include <string>

namespace sda::proto {

namespace {
constexpr std::array<std::string_view, kAllCommandKinds.size()> kNames = {
    "INSTALL_DEFINITION", "INSTALL_STYLESHEET", "INSTALL_ROLE", "REVOKE_ROLE",
    "CREATE_DOC",         "STORE_DOC",          "GET_DOC",      "SEARCH_DOCS",
    "RENDER_DOC",         "VERIFY_DOC",         "SET_ATTRIBUTE", "GET_ATTRIBUTE",
    "LIST_TYPES",         "STATUS",             "START_PORT",   "STOP_PORT",
};
} // namespace

std::string_view to_string(CommandKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)]; }

CommandKind parse_command_kind(std::string_view text) {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == text) return kAllCommandKinds[i];
    }
    throw error(errc::unknown_command, std::string(text));
}

bool is_admin_kind(CommandKind kind) noexcept {
    switch (kind) {
    case CommandKind::install_role:
    case CommandKind::revoke_role:
    case CommandKind::start_port:
    case CommandKind::stop_port:
        return true;
    default:
        return false;
    }
}

bool is_mutating(CommandKind kind) noexcept {
    switch (kind) {
    case CommandKind::install_definition:
    case CommandKind::install_stylesheet:
    case CommandKind::install_role:
    case CommandKind::revoke_role:
    case CommandKind::store_doc:
    case CommandKind::set_attribute:
        return true;
    default:
        return false;
    }
}

} // namespace sda::proto
