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
 * @file defman.hpp
 * @brief Definition installer: local checks, then signed install commands.
 */

#pragma once

#include "sda/client/client.hpp"

#include <filesystem>
#include <vector>

namespace sda::client {

[[nodiscard]] edoc::DocTypeDefinition load_definition(const std::filesystem::path& path);
[[nodiscard]] edoc::Stylesheet load_stylesheet(const std::filesystem::path& path);

/// Checks every stylesheet against `def` before anything is sent.
/// Throws the local validation error, or PlatformError for the first failing command.
void defman_install(Client& client, const edoc::DocTypeDefinition& def, const std::vector<edoc::Stylesheet>& sheets);

} // namespace sda::client
