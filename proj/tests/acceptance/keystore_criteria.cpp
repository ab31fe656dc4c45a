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

#include "criteria.hpp"

#include "platform_harness.hpp"

#include <sstream>

namespace sda::acceptance {

using namespace sda::testing;

namespace {

enum class Outcome { opened, wrong_pin, locked_after_this_attempt, keystore_locked };

const char* name(Outcome o) {
    switch (o) {
    case Outcome::opened:
        return "OK";
    case Outcome::wrong_pin:
        return "WRONG_PIN";
    case Outcome::locked_after_this_attempt:
        return "LOCKED_AFTER_THIS_ATTEMPT";
    case Outcome::keystore_locked:
        return "KEYSTORE_LOCKED";
    }
    return "?";
}

/// Smart-card rule: three wrong PINs in a row lock for good; a right PIN resets the count.
struct CardModel {
    int failures = 0;
    bool locked = false;

    Outcome attempt(bool right) {
        if (locked) return Outcome::keystore_locked;
        if (right) {
            failures = 0;
            return Outcome::opened;
        }
        if (++failures == crypto::kMaxPinFailures) {
            locked = true;
            return Outcome::locked_after_this_attempt;
        }
        return Outcome::wrong_pin;
    }
};

Outcome attempt(const std::filesystem::path& file, bool right) {
    // Reload every time: the counter must live in the file, not the process.
    auto ks = crypto::SoftKeystore::load(file);
    try {
        (void)ks.open(right ? kPin : "9999");
        return Outcome::opened;
    } catch (const error& e) {
        switch (e.code()) {
        case errc::wrong_pin:
            return Outcome::wrong_pin;
        case errc::locked_after_this_attempt:
            return Outcome::locked_after_this_attempt;
        case errc::keystore_locked:
            return Outcome::keystore_locked;
        default:
            throw;
        }
    }
}

} // namespace

Verdict keystore_lockout() {
    TempDir dir("lockout");
    auto id = make_identity("Card holder", "physician");
    std::size_t sequences = 0;
    std::size_t matched = 0;
    std::size_t attempts = 0;
    std::ostringstream first_miss;
    for (int length = 0; length <= 5; ++length) {
        for (unsigned bits = 0; bits < (1u << length); ++bits) {
            ++sequences;
            auto file = dir.path() / ("ks-" + std::to_string(sequences));
            (void)id.keystore_file(file);
            CardModel model;
            std::string trace;
            bool same = true;
            for (int i = 0; i < length; ++i) {
                bool right = ((bits >> i) & 1u) != 0;
                auto want = model.attempt(right);
                auto got = attempt(file, right);
                ++attempts;
                trace += std::string(right ? "R" : "W") + "=" + name(got) + " ";
                if (got != want) {
                    same = false;
                    trace += "(want " + std::string(name(want)) + ") ";
                }
            }
            auto after = crypto::SoftKeystore::load(file);
            same = same && after.locked() == model.locked && after.failure_counter() == model.failures;
            if (same) {
                ++matched;
            } else if (first_miss.tellp() == 0) {
                first_miss << "; first mismatch: " << trace << "stored failures=" << after.failure_counter()
                           << " locked=" << after.locked();
            }
        }
    }
    return {matched == sequences && sequences == 63,
            std::to_string(matched) + "/" + std::to_string(sequences) + " PIN sequences (" + std::to_string(attempts) +
                " attempts, key file reloaded each time) match the lockout model" + first_miss.str()};
}

} // namespace sda::acceptance
