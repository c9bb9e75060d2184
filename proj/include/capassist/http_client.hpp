// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <json.hpp>

#include <chrono>
#include <string>
#include <utility>
#include <vector>

namespace capassist {

struct HttpEndpoint {
    std::string url; // "http://host:port/path" or "https://..."
    std::vector<std::pair<std::string, std::string>> headers;
    std::chrono::milliseconds timeout{30000};
};

// POSTs `body` as JSON and returns the parsed JSON response. Connection
// failures, non-2xx statuses, and unparsable bodies throw Error(transport_error).
nlohmann::json post_json(const HttpEndpoint &endpoint, const nlohmann::json &body);

} // namespace capassist
