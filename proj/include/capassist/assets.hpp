// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <string_view>

// Copies of the files under assets/, compiled in at build time.
namespace capassist::assets {

std::string_view lexicons_conf();
std::string_view generation_conf();
std::string_view rating_prompt();

} // namespace capassist::assets
