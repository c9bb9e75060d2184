// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/text.hpp>

#include <cctype>

namespace capassist::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

} // namespace

std::string_view trim(std::string_view s) {
    while(!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while(!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for(auto &c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

std::string ascii_upper(std::string_view s) {
    std::string out(s);
    for(auto &c : out) {
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return out;
}

std::vector<std::string_view> split_words(std::string_view s) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while(i < s.size()) {
        while(i < s.size() && is_space(s[i])) {
            ++i;
        }
        std::size_t start = i;
        while(i < s.size() && !is_space(s[i])) {
            ++i;
        }
        if(i > start) {
            words.push_back(s.substr(start, i - start));
        }
    }
    return words;
}

std::size_t word_count(std::string_view s) { return split_words(s).size(); }

std::string_view first_words(std::string_view s, std::size_t max_words) {
    auto words = split_words(s);
    if(words.size() <= max_words) {
        return trim(s);
    }
    if(max_words == 0) {
        return {};
    }
    const auto &last = words[max_words - 1];
    const auto *begin = words.front().data();
    return std::string_view(begin, static_cast<std::size_t>(last.data() + last.size() - begin));
}

std::string collapse_whitespace(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for(char c : trim(s)) {
        if(is_space(c)) {
            pending_space = true;
            continue;
        }
        if(pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::size_t utf8_floor(std::string_view s, std::size_t max_bytes) {
    if(max_bytes >= s.size()) {
        return s.size();
    }
    std::size_t n = max_bytes;
    while(n > 0 && (static_cast<unsigned char>(s[n]) & 0xC0) == 0x80) {
        --n;
    }
    return n;
}

std::string join(const std::vector<std::string> &parts, std::string_view sep) {
    std::string out;
    for(std::size_t i = 0; i < parts.size(); ++i) {
        if(i > 0) {
            out.append(sep);
        }
        out.append(parts[i]);
    }
    return out;
}

bool iequals(std::string_view a, std::string_view b) {
    if(a.size() != b.size()) {
        return false;
    }
    for(std::size_t i = 0; i < a.size(); ++i) {
        if(std::tolower(static_cast<unsigned char>(a[i])) !=
           std::tolower(static_cast<unsigned char>(b[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace capassist::text
