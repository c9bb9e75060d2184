// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/service.hpp>

#include <memory>
#include <string>

namespace capassist {

// HTTP+JSON front end for a Service.
//
//   POST /documents                               bundle JSON, raw text layer, or multipart "file"
//   GET  /documents/{id}/figures
//   GET  /documents/{id}/figures/{fid}
//   GET  /documents/{id}/figures/{fid}/image
//   PUT  /documents/{id}/figures/{fid}/draft      {"caption": "..."}
//   POST /documents/{id}/figures/{fid}/evaluate   {"caption": "..."}
//   GET  /healthz
//
// Failures answer {code, message, detail?} with the status from http_status().
class HttpApi {
public:
    explicit HttpApi(Service &service);
    ~HttpApi();

    HttpApi(const HttpApi &) = delete;
    HttpApi &operator=(const HttpApi &) = delete;

    // Binds; port 0 picks a free port. Returns the bound port. Throws
    // Error(transport_error) when binding fails.
    int bind(const std::string &host, int port);
    // Serves until stop(); call after bind().
    void listen();
    void stop();
    void wait_until_ready() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace capassist
