// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

struct CsvRow {
    std::size_t line = 0; // 1-based line of the row's first character
    std::vector<std::string> fields;
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<CsvRow> rows;
};

// RFC 4180 fields: comma separated, optional double quotes with "" escapes,
// LF or CRLF line ends, optional UTF-8 BOM. Blank lines are skipped.
// Throws ParseError on an unterminated quote or stray characters after one.
CsvTable parse_csv(std::string_view text);

// parse_csv plus schema checks: the header must equal `columns` exactly and
// every row must have that many fields. Throws ValidationError naming the
// line ("/line/7") otherwise.
CsvTable parse_csv_strict(std::string_view text, std::span<const std::string_view> columns);

} // namespace capassist
