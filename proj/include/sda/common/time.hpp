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

#include <chrono>
#include <functional>
#include <string>
#include <string_view>

namespace sda {

/// Whole-second UTC instant. Every timestamp on the wire has this resolution.
using Timestamp = std::chrono::sys_seconds;

/// Injectable time source; tests pin or skew it.
using Clock = std::function<Timestamp()>;

[[nodiscard]] Timestamp system_now();
[[nodiscard]] Clock system_clock();
[[nodiscard]] Clock fixed_clock(Timestamp at);

/// "YYYY-MM-DDTHH:MM:SSZ"
[[nodiscard]] std::string format_timestamp(Timestamp t);
/// Inverse of format_timestamp; throws error(malformed).
[[nodiscard]] Timestamp parse_timestamp(std::string_view text);

/// True iff text is a real calendar day in ISO-8601 "YYYY-MM-DD" form.
[[nodiscard]] bool is_iso_date(std::string_view text);

/// The calendar day of t, as "YYYY-MM-DD".
[[nodiscard]] std::string format_date(Timestamp t);

} // namespace sda
