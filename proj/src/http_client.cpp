// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <httplib.h>

#include <capassist/errors.hpp>
#include <capassist/http_client.hpp>

namespace capassist {

namespace {

struct SplitUrl {
    std::string origin; // scheme://host[:port]
    std::string path;
};

SplitUrl split_url(const std::string &url) {
    auto scheme_end = url.find("://");
    if(scheme_end == std::string::npos) {
        throw Error(ErrorCode::transport_error, "endpoint URL must include a scheme", url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if(path_start == std::string::npos) {
        return {url, "/"};
    }
    return {url.substr(0, path_start), url.substr(path_start)};
}

} // namespace

nlohmann::json post_json(const HttpEndpoint &endpoint, const nlohmann::json &body) {
    const auto [origin, path] = split_url(endpoint.url);
    httplib::Client client(origin);
    if(!client.is_valid()) {
        throw Error(ErrorCode::transport_error, "invalid endpoint", endpoint.url);
    }
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(endpoint.timeout);
    const auto usecs =
        std::chrono::duration_cast<std::chrono::microseconds>(endpoint.timeout - secs);
    client.set_connection_timeout(secs.count(), usecs.count());
    client.set_read_timeout(secs.count(), usecs.count());
    client.set_write_timeout(secs.count(), usecs.count());

    httplib::Headers headers;
    for(const auto &[k, v] : endpoint.headers) {
        headers.emplace(k, v);
    }
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if(!res) {
        throw Error(ErrorCode::transport_error, "request failed: " + httplib::to_string(res.error()),
                    endpoint.url);
    }
    if(res->status < 200 || res->status >= 300) {
        throw Error(ErrorCode::transport_error,
                    "upstream returned HTTP " + std::to_string(res->status), res->body);
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch(const nlohmann::json::parse_error &e) {
        throw Error(ErrorCode::transport_error, "upstream body is not JSON", res->body);
    }
}

} // namespace capassist
