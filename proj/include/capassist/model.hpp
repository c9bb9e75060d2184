// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

enum class FigureKind { chart, other, table };

std::string_view to_string(FigureKind kind);
std::optional<FigureKind> figure_kind_from_string(std::string_view s);

struct Region {
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;

    bool operator==(const Region &) const = default;
};

struct FigureRecord {
    std::string id; // canonical, see figure_id.hpp
    FigureKind kind = FigureKind::chart;
    std::string caption;
    int page = 1;
    std::optional<Region> region;
    std::vector<std::string> figure_text;
    std::optional<std::string> image_ref;

    bool operator==(const FigureRecord &) const = default;
};

struct Paragraph {
    std::size_t index = 0;
    std::string text;
    // Canonical ids of figures this paragraph mentions; filled by the linker.
    std::set<std::string> mentions;

    bool operator==(const Paragraph &) const = default;
};

struct Document {
    std::string doc_id;
    std::string title;
    std::string abstract;
    std::vector<Paragraph> paragraphs;
    std::vector<FigureRecord> figures;
    std::string source_digest; // lowercase hex SHA-256

    const FigureRecord *find_figure(std::string_view id) const;

    bool operator==(const Document &) const = default;
};

// ---------------------------------------------------------------------------
// Check table

// Fixed display order of the check table.
enum class Aspect { helpfulness, ocr, relation, stats, takeaway, visual };

inline constexpr std::array<Aspect, 6> all_aspects{
    Aspect::helpfulness, Aspect::ocr, Aspect::relation,
    Aspect::stats, Aspect::takeaway, Aspect::visual,
};

// The five aspects that are detected directly from caption content.
inline constexpr std::array<Aspect, 5> content_aspects{
    Aspect::ocr, Aspect::relation, Aspect::stats, Aspect::takeaway, Aspect::visual,
};

std::string_view to_string(Aspect aspect);
std::optional<Aspect> aspect_from_string(std::string_view s);

enum class Satisfied { yes, no, unknown };

std::string_view to_string(Satisfied s);

// Half-open byte range [begin, end) into the caption (UTF-8).
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;

    bool operator==(const Span &) const = default;
};

struct AspectEntry {
    Satisfied satisfied = Satisfied::no;
    std::vector<Span> evidence;
    std::string backend_id;

    bool operator==(const AspectEntry &) const = default;
};

struct AspectReport {
    std::array<AspectEntry, 6> entries; // indexed by Aspect

    AspectEntry &operator[](Aspect a) { return entries[static_cast<std::size_t>(a)]; }
    const AspectEntry &operator[](Aspect a) const { return entries[static_cast<std::size_t>(a)]; }
    bool is_yes(Aspect a) const { return (*this)[a].satisfied == Satisfied::yes; }

    bool operator==(const AspectReport &) const = default;
};

// ---------------------------------------------------------------------------
// Ratings and generated captions

struct CaptionRating {
    int score = 1; // 1..6
    std::string explanation;
    std::string backend_id;
    std::optional<std::string> raw_response;

    bool operator==(const CaptionRating &) const = default;
};

enum class Variant { long_caption, short_caption };

std::string_view to_string(Variant v);
std::optional<Variant> variant_from_string(std::string_view s);

struct GeneratedCaption {
    Variant variant = Variant::short_caption;
    std::string text;
    std::optional<CaptionRating> rating;
    std::string backend_id;

    bool operator==(const GeneratedCaption &) const = default;
};

// ---------------------------------------------------------------------------
// Editing session

struct Draft {
    std::string caption;
    std::int64_t timestamp_ms = 0;

    bool operator==(const Draft &) const = default;
};

struct Evaluation {
    std::string caption;
    AspectReport report;
    CaptionRating rating;
    std::int64_t timestamp_ms = 0;

    bool operator==(const Evaluation &) const = default;
};

inline constexpr int default_evaluation_limit = 2;

struct CaptionSession {
    std::string doc_id;
    std::string figure_id;
    std::vector<Draft> drafts;
    std::vector<Evaluation> evaluations;
    int evaluation_limit = default_evaluation_limit;

    int evaluation_count() const { return static_cast<int>(evaluations.size()); }
    int remaining() const { return evaluation_limit - evaluation_count(); }

    bool operator==(const CaptionSession &) const = default;
};

} // namespace capassist
