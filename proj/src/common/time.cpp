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

#include "sda/common/time.hpp"

#include "sda/common/error.hpp"

#include <charconv>
#include <cstdio>
#include <ctime>

namespace sda {
namespace {

bool parse_digits(std::string_view text, std::size_t pos, std::size_t len, int& out) {
    if (pos + len > text.size()) {
        return false;
    }
    for (std::size_t i = pos; i < pos + len; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
    }
    auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && ptr == text.data() + pos + len;
}

bool leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : kDays[m - 1];
}

bool parse_day(std::string_view text, int& y, int& m, int& d) {
    if (text.size() < 10 || text[4] != '-' || text[7] != '-') {
        return false;
    }
    if (!parse_digits(text, 0, 4, y) || !parse_digits(text, 5, 2, m) || !parse_digits(text, 8, 2, d)) {
        return false;
    }
    return y >= 1 && m >= 1 && m <= 12 && d >= 1 && d <= days_in_month(y, m);
}

} // namespace

Timestamp system_now() {
    return std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
}

Clock system_clock() { return [] { return system_now(); }; }

Clock fixed_clock(Timestamp at) {
    return [at] { return at; };
}

std::string format_timestamp(Timestamp t) {
    std::time_t raw = t.time_since_epoch().count();
    std::tm tm{};
    gmtime_r(&raw, &tm);
    char buf[80];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900, tm.tm_mon + 1,
                  tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
    return buf;
}

Timestamp parse_timestamp(std::string_view text) {
    int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
    if (text.size() != 20 || !parse_day(text, y, mo, d) || text[10] != 'T' || text[13] != ':' ||
        text[16] != ':' || text[19] != 'Z' || !parse_digits(text, 11, 2, h) ||
        !parse_digits(text, 14, 2, mi) || !parse_digits(text, 17, 2, s) || h > 23 || mi > 59 || s > 59) {
        throw error(errc::malformed, "bad timestamp '" + std::string(text) + "'");
    }
    using namespace std::chrono;
    auto day = sys_days{year{y} / month{static_cast<unsigned>(mo)} / static_cast<unsigned>(d)};
    return Timestamp{day} + hours{h} + minutes{mi} + seconds{s};
}

bool is_iso_date(std::string_view text) {
    int y = 0, m = 0, d = 0;
    return text.size() == 10 && parse_day(text, y, m, d);
}

std::string format_date(Timestamp t) { return format_timestamp(t).substr(0, 10); }

} // namespace sda
