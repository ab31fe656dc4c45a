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
 * @file wysiwys.hpp
 * @brief Review-then-sign: the signature binds the exact text shown.
 */

#pragma once

#include "sda/crypto/keystore.hpp"
#include "sda/edoc/edoc.hpp"

#include <functional>
#include <random>

namespace sda::client {

/// Shows the view and returns true to sign.
using Confirm = std::function<bool(const edoc::RenderedView& view)>;

/// Refuses (error(malformed)) when the view's digest does not match its text;
/// throws error(user_abort) without touching the keystore when `confirm`
/// declines. Keystore errors propagate.
[[nodiscard]] edoc::EDoc wysiwys_sign(edoc::EDoc doc, const edoc::RenderedView& view, crypto::SoftKeystore& keystore,
                                      std::string_view pin, const Confirm& confirm, Timestamp now = system_now());

/// Six characters from an alphabet without look-alikes.
[[nodiscard]] std::string confirmation_code();

} // namespace sda::client
