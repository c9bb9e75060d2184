// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace capassist::text {

std::string_view trim(std::string_view s);
std::string ascii_lower(std::string_view s);
std::string ascii_upper(std::string_view s);

// Whitespace-delimited words.
std::vector<std::string_view> split_words(std::string_view s);
std::size_t word_count(std::string_view s);

// Keep the first `max_words` whitespace-delimited words, dropping trailing
// whitespace. Returns a prefix of `s`.
std::string_view first_words(std::string_view s, std::size_t max_words);

// Collapse whitespace runs to a single space and trim.
std::string collapse_whitespace(std::string_view s);

// Largest prefix length <= max_bytes that does not split a UTF-8 sequence.
std::size_t utf8_floor(std::string_view s, std::size_t max_bytes);

std::string join(const std::vector<std::string> &parts, std::string_view sep);

bool iequals(std::string_view a, std::string_view b);

} // namespace capassist::text
