// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

// Line-oriented key/value lists used by the lexicon and generation configs.
//
//   # comment
//   key = value
//   key = another value        (repeated keys append)
//
// Values are taken verbatim after trimming; no escaping is applied, so regular
// expressions can be written as-is.
class KvConfig {
public:
    static KvConfig parse(std::string_view text, std::string_view source_name = "<config>");
    static KvConfig load_file(const std::string &path);

    bool has(std::string_view key) const;
    const std::vector<std::string> &values(std::string_view key) const;

    // Values split on commas, each item trimmed, empty items dropped.
    std::vector<std::string> comma_list(std::string_view key) const;

    // The last value of `key`; throws Error(validation_error) if absent.
    const std::string &scalar(std::string_view key) const;
    double number(std::string_view key) const;
    std::optional<double> number_or(std::string_view key) const;

    std::vector<std::string> keys() const;

private:
    std::map<std::string, std::vector<std::string>, std::less<>> entries_;
    std::string source_;
};

} // namespace capassist
