// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <string>
#include <string_view>

namespace capassist {

// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

} // namespace capassist
