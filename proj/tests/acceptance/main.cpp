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

// Acceptance run: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include "criteria.hpp"

#include "sda/common/error.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>

namespace sda::acceptance {

std::filesystem::path tools_dir() { return SDA_TOOLS_DIR; }

} // namespace sda::acceptance

int main(int argc, char** argv) {
    using namespace sda::acceptance;
    struct Criterion {
        int number;
        const char* title;
        std::function<Verdict()> check;
    };
    const Criterion criteria[] = {
        {1, "authorization matrix", authorization_matrix},
        {2, "tamper detection", tamper_detection},
        {3, "canonicalization and codec", canonical_codec},
        {4, "gateway transparency", gateway_transparency},
        {5, "end-to-end e-MR workflow via CLI", end_to_end_workflow},
        {6, "concurrency safety", concurrency_safety},
        {7, "keystore lockout", keystore_lockout},
        {8, "durability across kills", durability},
    };
    int only = argc > 1 ? std::atoi(argv[1]) : 0;
    bool all_pass = true;
    for (const auto& c : criteria) {
        if (only != 0 && c.number != only) continue;
        auto start = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.check();
        } catch (const std::exception& e) {
            v = {false, std::string("aborted: ") + e.what()};
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all_pass = all_pass && v.pass;
        std::printf("criterion %d %s: %s -- %s (%.2fs)\n", c.number, v.pass ? "PASS" : "FAIL", c.title,
                    v.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
