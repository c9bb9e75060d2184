// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/errors.hpp>
#include <capassist/kvconfig.hpp>
#include <capassist/text.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace capassist {

KvConfig KvConfig::parse(std::string_view body, std::string_view source_name) {
    KvConfig cfg;
    cfg.source_ = source_name;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while(pos <= body.size()) {
        auto nl = body.find('\n', pos);
        if(nl == std::string_view::npos) {
            nl = body.size();
        }
        auto line = text::trim(body.substr(pos, nl - pos));
        pos = nl + 1;
        ++line_no;
        if(line.empty() || line.front() == '#') {
            continue;
        }
        auto eq = line.find('=');
        if(eq == std::string_view::npos) {
            throw ValidationError("expected 'key = value'",
                                  std::string(source_name) + ":" + std::to_string(line_no));
        }
        auto key = text::trim(line.substr(0, eq));
        auto value = text::trim(line.substr(eq + 1));
        if(key.empty()) {
            throw ValidationError("empty key",
                                  std::string(source_name) + ":" + std::to_string(line_no));
        }
        cfg.entries_[std::string(key)].emplace_back(value);
    }
    return cfg;
}

KvConfig KvConfig::load_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) {
        throw Error(ErrorCode::invalid_argument, "cannot open config file", path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

bool KvConfig::has(std::string_view key) const { return entries_.find(key) != entries_.end(); }

const std::vector<std::string> &KvConfig::values(std::string_view key) const {
    static const std::vector<std::string> empty;
    auto it = entries_.find(key);
    return it == entries_.end() ? empty : it->second;
}

std::vector<std::string> KvConfig::comma_list(std::string_view key) const {
    std::vector<std::string> out;
    for(const auto &v : values(key)) {
        std::size_t start = 0;
        while(start <= v.size()) {
            auto comma = v.find(',', start);
            if(comma == std::string::npos) {
                comma = v.size();
            }
            auto item = text::trim(std::string_view(v).substr(start, comma - start));
            if(!item.empty()) {
                out.emplace_back(item);
            }
            start = comma + 1;
        }
    }
    return out;
}

const std::string &KvConfig::scalar(std::string_view key) const {
    auto it = entries_.find(key);
    if(it == entries_.end() || it->second.empty()) {
        throw ValidationError("missing config key '" + std::string(key) + "'", source_);
    }
    return it->second.back();
}

double KvConfig::number(std::string_view key) const {
    const auto &s = scalar(key);
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if(ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ValidationError("config key '" + std::string(key) + "' is not a number", source_);
    }
    return v;
}

std::optional<double> KvConfig::number_or(std::string_view key) const {
    if(!has(key)) {
        return std::nullopt;
    }
    return number(key);
}

std::vector<std::string> KvConfig::keys() const {
    std::vector<std::string> out;
    for(const auto &[k, _] : entries_) {
        out.push_back(k);
    }
    return out;
}

} // namespace capassist
