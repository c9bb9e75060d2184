// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/csv.hpp>
#include <capassist/errors.hpp>
#include <capassist/text.hpp>

namespace capassist {

CsvTable parse_csv(std::string_view text) {
    std::size_t i = 0;
    if(text.substr(0, 3) == "\xEF\xBB\xBF") {
        i = 3;
    }
    std::vector<CsvRow> records;
    std::size_t line = 1;

    while(i < text.size()) {
        CsvRow row;
        row.line = line;
        std::string field;
        bool row_done = false;
        while(!row_done) {
            field.clear();
            if(i < text.size() && text[i] == '"') {
                const std::size_t open = i++;
                for(;;) {
                    if(i >= text.size()) {
                        throw ParseError("unterminated quoted field", open);
                    }
                    if(text[i] == '"') {
                        if(i + 1 < text.size() && text[i + 1] == '"') {
                            field.push_back('"');
                            i += 2;
                            continue;
                        }
                        ++i;
                        break;
                    }
                    if(text[i] == '\n') {
                        ++line;
                    }
                    field.push_back(text[i++]);
                }
                if(i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    throw ParseError("unexpected character after closing quote", i);
                }
            } else {
                while(i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r') {
                    field.push_back(text[i++]);
                }
            }
            row.fields.push_back(field);
            if(i >= text.size()) {
                row_done = true;
            } else if(text[i] == ',') {
                ++i;
            } else {
                if(text[i] == '\r') {
                    ++i;
                }
                if(i < text.size() && text[i] == '\n') {
                    ++i;
                }
                ++line;
                row_done = true;
            }
        }
        const bool blank = row.fields.size() == 1 && text::trim(row.fields[0]).empty();
        if(!blank) {
            records.push_back(std::move(row));
        }
    }

    CsvTable table;
    if(records.empty()) {
        return table;
    }
    table.header = std::move(records.front().fields);
    table.rows.assign(std::make_move_iterator(records.begin() + 1), std::make_move_iterator(records.end()));
    return table;
}

CsvTable parse_csv_strict(std::string_view text, std::span<const std::string_view> columns) {
    auto table = parse_csv(text);
    if(table.header.empty()) {
        throw ValidationError("CSV is empty; expected a header row", "/line/1");
    }
    bool header_ok = table.header.size() == columns.size();
    for(std::size_t c = 0; header_ok && c < columns.size(); ++c) {
        header_ok = text::trim(table.header[c]) == columns[c];
    }
    if(!header_ok) {
        std::string expected;
        for(auto c : columns) {
            expected += expected.empty() ? "" : ",";
            expected += c;
        }
        throw ValidationError("CSV header must be exactly: " + expected, "/line/1");
    }
    for(const auto &row : table.rows) {
        if(row.fields.size() != columns.size()) {
            throw ValidationError("row has " + std::to_string(row.fields.size()) + " fields, expected " +
                                      std::to_string(columns.size()),
                                  "/line/" + std::to_string(row.line));
        }
    }
    return table;
}

} // namespace capassist
