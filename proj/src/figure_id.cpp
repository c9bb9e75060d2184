// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>

#include <cctype>

namespace capassist {

namespace {

bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

} // namespace

bool is_raw_figure_id(std::string_view token) noexcept {
    if(token.empty()) {
        return false;
    }
    std::size_t i = is_alpha(token[0]) ? 1 : 0;
    if(i == token.size()) {
        return false;
    }
    for(; i < token.size(); ++i) {
        if(!is_digit(token[i])) {
            return false;
        }
    }
    return true;
}

bool is_canonical_figure_id(std::string_view token) noexcept {
    if(!is_raw_figure_id(token)) {
        return false;
    }
    try {
        return normalize_figure_id(token) == token;
    } catch(...) {
        return false;
    }
}

std::string normalize_figure_id(std::string_view token) {
    if(!is_raw_figure_id(token)) {
        throw Error(ErrorCode::invalid_argument,
                    "not a figure identifier: '" + std::string(token) + "'");
    }
    std::string out;
    std::size_t i = 0;
    if(is_alpha(token[0])) {
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(token[0]))));
        i = 1;
    }
    while(i + 1 < token.size() && token[i] == '0') {
        ++i;
    }
    out.append(token.substr(i));
    return out;
}

} // namespace capassist
