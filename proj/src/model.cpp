// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/errors.hpp>
#include <capassist/model.hpp>

namespace capassist {

std::string_view to_string(ErrorCode code) {
    switch(code) {
    case ErrorCode::parse_error: return "parse_error";
    case ErrorCode::validation_error: return "validation_error";
    case ErrorCode::not_found: return "not_found";
    case ErrorCode::conflict: return "conflict";
    case ErrorCode::submission_limit_reached: return "submission_limit_reached";
    case ErrorCode::payload_too_large: return "payload_too_large";
    case ErrorCode::empty_caption: return "empty_caption";
    case ErrorCode::ingest_error: return "ingest_error";
    case ErrorCode::analysis_error: return "analysis_error";
    case ErrorCode::rating_error: return "rating_error";
    case ErrorCode::generation_error: return "generation_error";
    case ErrorCode::transport_error: return "transport_error";
    case ErrorCode::storage_error: return "storage_error";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::degenerate_sample: return "degenerate_sample";
    }
    return "unknown";
}

std::string_view to_string(FigureKind kind) {
    switch(kind) {
    case FigureKind::chart: return "chart";
    case FigureKind::other: return "other";
    case FigureKind::table: return "table";
    }
    return "other";
}

std::optional<FigureKind> figure_kind_from_string(std::string_view s) {
    if(s == "chart") return FigureKind::chart;
    if(s == "other") return FigureKind::other;
    if(s == "table") return FigureKind::table;
    return std::nullopt;
}

std::string_view to_string(Aspect aspect) {
    switch(aspect) {
    case Aspect::helpfulness: return "helpfulness";
    case Aspect::ocr: return "ocr";
    case Aspect::relation: return "relation";
    case Aspect::stats: return "stats";
    case Aspect::takeaway: return "takeaway";
    case Aspect::visual: return "visual";
    }
    return "helpfulness";
}

std::optional<Aspect> aspect_from_string(std::string_view s) {
    for(auto a : all_aspects) {
        if(to_string(a) == s) {
            return a;
        }
    }
    return std::nullopt;
}

std::string_view to_string(Satisfied s) {
    switch(s) {
    case Satisfied::yes: return "yes";
    case Satisfied::no: return "no";
    case Satisfied::unknown: return "unknown";
    }
    return "unknown";
}

std::string_view to_string(Variant v) {
    return v == Variant::long_caption ? "long" : "short";
}

std::optional<Variant> variant_from_string(std::string_view s) {
    if(s == "long") return Variant::long_caption;
    if(s == "short") return Variant::short_caption;
    return std::nullopt;
}

const FigureRecord *Document::find_figure(std::string_view id) const {
    for(const auto &f : figures) {
        if(f.id == id) {
            return &f;
        }
    }
    return nullptr;
}

} // namespace capassist
