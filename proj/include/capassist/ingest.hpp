// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/model.hpp>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

struct TextBlock {
    int page = 1;
    std::string text;
    std::optional<Region> bbox; // page coordinates, y grows downward
};

// Source of a document's text layer, in (page, reading order).
class TextExtractor {
public:
    virtual ~TextExtractor() = default;
    virtual std::vector<TextBlock> extract(std::string_view pdf_bytes) const = 0;
    virtual std::string name() const = 0;
};

// Plain-text stand-in for a PDF text layer. UTF-8 text; pages are separated by
// a line holding only a form feed (or the two characters "\f"); blocks are
// separated by blank lines. A block may start with a line
//
//   @bbox x1 y1 x2 y2
//
// giving its rectangle on the page.
class FixtureTextExtractor final : public TextExtractor {
public:
    std::vector<TextBlock> extract(std::string_view bytes) const override;
    std::string name() const override { return "fixture-text"; }
};

struct CaptionBlock {
    std::string figure_id; // canonical
    std::string caption;   // without the "Figure N:" label
    int page = 1;
    FigureKind kind = FigureKind::chart; // table for "Table N" captions
    std::size_t block_index = 0;
};

struct CaptionDetection {
    std::vector<CaptionBlock> captions;
    std::vector<std::string> warnings;
};

// A block is a caption when its whitespace-normalized text starts with
// "Figure N" / "Fig. N" (or "Table N") followed by "." or ":". Later blocks
// repeating an id of the same kind are skipped with a warning.
CaptionDetection detect_caption_blocks(std::span<const TextBlock> blocks);

struct IngestMeta {
    std::string doc_id; // empty: derived from the content digest
};

struct IngestResult {
    Document document;
    std::vector<std::string> warnings;
    std::size_t tables_excluded = 0;
};

// Paragraph mentions are linked. Throws Error(ingest_error) when the
// extractor fails or yields no blocks.
IngestResult build_document(std::string_view pdf_bytes, const TextExtractor &extractor,
                            const IngestMeta &meta);

} // namespace capassist
