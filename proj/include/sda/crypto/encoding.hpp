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

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sda::crypto {

using Bytes = std::vector<std::uint8_t>;

[[nodiscard]] std::string to_hex(const std::uint8_t* data, std::size_t size);
[[nodiscard]] std::string to_hex(const Bytes& data);
/// Throws error(malformed) on odd length or non-hex characters.
[[nodiscard]] Bytes from_hex(std::string_view hex);

[[nodiscard]] std::string to_base64(const Bytes& data);
/// Standard alphabet with padding. Throws error(malformed).
[[nodiscard]] Bytes from_base64(std::string_view text);

/// Fills `size` bytes from the OS entropy source. Throws error(entropy_failure).
[[nodiscard]] Bytes random_bytes(std::size_t size);
[[nodiscard]] std::string random_hex(std::size_t size);

/// One-time libsodium initialisation; throws error(entropy_failure) if it fails.
void ensure_sodium();

} // namespace sda::crypto
