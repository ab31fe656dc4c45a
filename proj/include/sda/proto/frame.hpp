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
 * @file frame.hpp
 * @brief Length-prefixed framing: 4-byte big-endian length, then canonical XML.
 */

#pragma once

#include "sda/proto/envelope.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace sda::proto {

inline constexpr std::size_t kDefaultMaxFrameBytes = 4u << 20;
inline constexpr std::size_t kFrameHeaderBytes = 4;

/// Prefixes `payload` with its length.
[[nodiscard]] std::string frame_bytes(std::string_view payload);
/// Throws error(oversize_frame) when `declared` exceeds `max_bytes`.
[[nodiscard]] std::uint32_t decode_frame_header(std::string_view header, std::size_t max_bytes);
/// Validates a complete frame and returns its payload. The length is
/// checked against `max_bytes` before the payload is looked at.
[[nodiscard]] std::string_view frame_payload(std::string_view frame, std::size_t max_bytes = kDefaultMaxFrameBytes);

[[nodiscard]] std::string encode_frame(const CommandEnvelope& env);
[[nodiscard]] std::string encode_frame(const ResponseEnvelope& resp);
[[nodiscard]] CommandEnvelope decode_command_frame(std::string_view frame,
                                                   std::size_t max_bytes = kDefaultMaxFrameBytes);
[[nodiscard]] ResponseEnvelope decode_response_frame(std::string_view frame,
                                                     std::size_t max_bytes = kDefaultMaxFrameBytes);

} // namespace sda::proto
