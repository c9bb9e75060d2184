// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/model.hpp>

#include <cstddef>
#include <string>
#include <string_view>

namespace capassist {

struct ParseSummary {
    std::size_t figures_kept = 0;
    std::size_t tables_dropped = 0;
    std::size_t empty_figure_text_tokens_dropped = 0;
};

struct BundleParse {
    Document document;
    ParseSummary summary;
};

// Parses the interchange bundle:
//
//   { "doc_id": str, "title": str, "abstract": str, "paragraphs": [str...],
//     "figures": [ { "id": str, "kind": "chart"|"table"|"other", "page": int,
//                    "caption": str, "region": {x1,y1,x2,y2}?,
//                    "figure_text": [str...]?, "image_ref": str? } ] }
//
// Unknown keys are ignored. Table-kind figures are dropped and counted in the
// summary. Figure ids are canonicalized. An optional "source_digest" string is
// carried through; when absent the digest is the SHA-256 of `bytes`.
//
// Throws ParseError (malformed JSON, with byte offset) or ValidationError
// (schema violation or duplicate id, with JSON-pointer path).
BundleParse parse_bundle_with_summary(std::string_view bytes);

Document parse_bundle(std::string_view bytes);

// Inverse of parse_bundle for invariant-satisfying documents. Paragraph
// mentions are derived data and are not serialized.
std::string serialize_bundle(const Document &doc, int indent = 2);

} // namespace capassist
