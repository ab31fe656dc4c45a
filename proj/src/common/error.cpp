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

#include "sda/common/error.hpp"

#include <array>
#include <utility>

namespace sda {
namespace {

struct errc_name {
    errc code;
    std::string_view text;
};

constexpr std::array kNames = {
#define SDA_ERRC_ENTRY(name, text) errc_name{errc::name, text},
    SDA_ERRC_LIST(SDA_ERRC_ENTRY)
#undef SDA_ERRC_ENTRY
};

} // namespace

std::string_view to_string(errc code) noexcept {
    for (const auto& entry : kNames) {
        if (entry.code == code) {
            return entry.text;
        }
    }
    return "INTERNAL";
}

std::optional<errc> parse_errc(std::string_view text) noexcept {
    for (const auto& entry : kNames) {
        if (entry.text == text) {
            return entry.code;
        }
    }
    return std::nullopt;
}

error::error(errc code, const std::string& detail)
    : std::runtime_error(detail.empty() ? std::string(to_string(code))
                                        : std::string(to_string(code)) + ": " + detail),
      code_(code),
      detail_(detail) {}

} // namespace sda
