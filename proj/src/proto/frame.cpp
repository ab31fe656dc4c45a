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

#include "sda/proto/frame.hpp"

#include "sda/common/error.hpp"

#include <limits>

namespace sda::proto {

std::string frame_bytes(std::string_view payload) {
    if (payload.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw error(errc::oversize_frame, std::to_string(payload.size()) + " bytes");
    }
    auto n = static_cast<std::uint32_t>(payload.size());
    std::string out;
    out.reserve(kFrameHeaderBytes + payload.size());
    out.push_back(static_cast<char>((n >> 24) & 0xff));
    out.push_back(static_cast<char>((n >> 16) & 0xff));
    out.push_back(static_cast<char>((n >> 8) & 0xff));
    out.push_back(static_cast<char>(n & 0xff));
    out.append(payload);
    return out;
}

std::uint32_t decode_frame_header(std::string_view header, std::size_t max_bytes) {
    if (header.size() < kFrameHeaderBytes) throw error(errc::malformed, "short frame header");
    std::uint32_t n = 0;
    for (std::size_t i = 0; i < kFrameHeaderBytes; ++i) {
        n = (n << 8) | static_cast<unsigned char>(header[i]);
    }
    if (n > max_bytes) {
        throw error(errc::oversize_frame, std::to_string(n) + " > " + std::to_string(max_bytes));
    }
    return n;
}

std::string_view frame_payload(std::string_view frame, std::size_t max_bytes) {
    auto n = decode_frame_header(frame, max_bytes);
    if (frame.size() - kFrameHeaderBytes != n) {
        throw error(errc::malformed, "declared length " + std::to_string(n) + ", got " +
                                         std::to_string(frame.size() - kFrameHeaderBytes));
    }
    return frame.substr(kFrameHeaderBytes);
}

std::string encode_frame(const CommandEnvelope& env) { return frame_bytes(xml::canonicalize(to_xml(env))); }

std::string encode_frame(const ResponseEnvelope& resp) { return frame_bytes(xml::canonicalize(to_xml(resp))); }

CommandEnvelope decode_command_frame(std::string_view frame, std::size_t max_bytes) {
    return command_from_xml(xml::parse(frame_payload(frame, max_bytes)));
}

ResponseEnvelope decode_response_frame(std::string_view frame, std::size_t max_bytes) {
    return response_from_xml(xml::parse(frame_payload(frame, max_bytes)));
}

} // namespace sda::proto
