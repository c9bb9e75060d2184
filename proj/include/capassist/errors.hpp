// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace capassist {

enum class ErrorCode {
    parse_error,
    validation_error,
    not_found,
    conflict,
    submission_limit_reached,
    payload_too_large,
    empty_caption,
    ingest_error,
    analysis_error,
    rating_error,
    generation_error,
    transport_error,
    storage_error,
    invalid_argument,
    degenerate_sample,
};

std::string_view to_string(ErrorCode code);

// Every failure surfaced by the library is an Error. `detail` is free-form
// context (a JSON path, a backend id, the raw upstream text) and may be empty.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &message, std::string detail = {})
        : std::runtime_error(message), code_(code), detail_(std::move(detail)) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string &detail() const noexcept { return detail_; }

private:
    ErrorCode code_;
    std::string detail_;
};

class ParseError : public Error {
public:
    ParseError(const std::string &message, std::size_t byte_offset)
        : Error(ErrorCode::parse_error, message, "byte " + std::to_string(byte_offset)),
          offset_(byte_offset) {}

    std::size_t byte_offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

class ValidationError : public Error {
public:
    ValidationError(const std::string &message, std::string path)
        : Error(ErrorCode::validation_error, message, path), path_(std::move(path)) {}

    // JSON pointer of the offending value, e.g. "/figures/1/id".
    const std::string &path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace capassist
