// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <string>
#include <string_view>

namespace capassist {

// Raw identifier grammar: an optional single ASCII letter followed by one or
// more digits ("3", "03", "a1", "S12"). The canonical form uppercases the
// letter and strips leading zeros from the number ("03" -> "3", "a01" -> "A1").
// A number made only of zeros canonicalizes to "0".
//
// Throws Error(invalid_argument) when `token` does not match the grammar.
std::string normalize_figure_id(std::string_view token);

bool is_raw_figure_id(std::string_view token) noexcept;
bool is_canonical_figure_id(std::string_view token) noexcept;

} // namespace capassist
