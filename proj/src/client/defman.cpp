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

#include "sda/client/defman.hpp"

#include "sda/common/error.hpp"
#include "sda/common/files.hpp"

namespace sda::client {

edoc::DocTypeDefinition load_definition(const std::filesystem::path& path) {
    auto def = edoc::definition_from_xml(xml::parse(read_file(path)));
    edoc::check_definition(def);
    return def;
}

edoc::Stylesheet load_stylesheet(const std::filesystem::path& path) {
    return edoc::stylesheet_from_xml(xml::parse(read_file(path)));
}

void defman_install(Client& client, const edoc::DocTypeDefinition& def, const std::vector<edoc::Stylesheet>& sheets) {
    edoc::check_definition(def);
    for (const auto& s : sheets) {
        edoc::check_stylesheet(s, def);
    }
    client.install_definition(def);
    for (const auto& s : sheets) {
        client.install_stylesheet(s);
    }
}

} // namespace sda::client
