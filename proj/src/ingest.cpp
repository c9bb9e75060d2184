// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/digest.hpp>
#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/ingest.hpp>
#include <capassist/mentions.hpp>
#include <capassist/text.hpp>

#include <cctype>
#include <cstdio>
#include <regex>
#include <set>
#include <sstream>

namespace capassist {

namespace {

std::vector<std::string_view> split_lines(std::string_view s) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while(start <= s.size()) {
        auto nl = s.find('\n', start);
        if(nl == std::string_view::npos) {
            nl = s.size();
        }
        auto line = s.substr(start, nl - start);
        if(!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        start = nl + 1;
    }
    return lines;
}

bool is_page_break(std::string_view line) {
    auto t = text::trim(line);
    return line == "\f" || t == "\\f" || (t.empty() && line.find('\f') != std::string_view::npos);
}

std::optional<Region> parse_bbox(std::string_view line) {
    std::istringstream in{std::string(line.substr(5))};
    Region r;
    if(in >> r.x1 >> r.y1 >> r.x2 >> r.y2) {
        return r;
    }
    return std::nullopt;
}

bool is_lower(char c) { return c >= 'a' && c <= 'z'; }

bool ends_sentence(std::string_view s) {
    s = text::trim(s);
    return !s.empty() && (s.back() == '.' || s.back() == '!' || s.back() == '?' || s.back() == ':');
}

// Joins the lines of one paragraph, undoing end-of-line hyphenation of a
// lowercase word ("experi-" + "ment").
void append_line(std::string &para, std::string_view line) {
    line = text::trim(line);
    if(line.empty()) {
        return;
    }
    if(para.empty()) {
        para.assign(line);
        return;
    }
    if(para.size() >= 2 && para.back() == '-' && is_lower(para[para.size() - 2]) &&
       is_lower(line.front())) {
        para.pop_back();
        para.append(line);
        return;
    }
    para.push_back(' ');
    para.append(line);
}

// One block may hold several paragraphs; an indented line opens a new one.
std::vector<std::string> block_paragraphs(std::string_view block_text) {
    std::vector<std::string> out;
    std::string current;
    bool first = true;
    for(auto line : split_lines(block_text)) {
        const bool indented = line.substr(0, 1) == "\t" || line.substr(0, 2) == "  ";
        if(!first && indented && !current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
        append_line(current, line);
        first = false;
    }
    if(!current.empty()) {
        out.push_back(std::move(current));
    }
    return out;
}

// Longer blocks above a caption are body text, not labels inside the figure.
constexpr std::size_t max_figure_block_words = 20;

bool overlaps_horizontally(const Region &a, const Region &b) {
    return a.x1 < b.x2 && b.x1 < a.x2;
}

} // namespace

// ---------------------------------------------------------------------------

std::vector<TextBlock> FixtureTextExtractor::extract(std::string_view bytes) const {
    std::vector<TextBlock> blocks;
    int page = 1;
    std::vector<std::string_view> pending;

    auto flush = [&] {
        if(pending.empty()) {
            return;
        }
        TextBlock b;
        b.page = page;
        std::size_t first = 0;
        if(pending.front().substr(0, 5) == "@bbox") {
            b.bbox = parse_bbox(pending.front());
            first = 1;
        }
        for(std::size_t i = first; i < pending.size(); ++i) {
            if(!b.text.empty()) {
                b.text.push_back('\n');
            }
            b.text.append(pending[i]);
        }
        pending.clear();
        if(!text::trim(b.text).empty()) {
            blocks.push_back(std::move(b));
        }
    };

    for(auto line : split_lines(bytes)) {
        if(is_page_break(line)) {
            flush();
            ++page;
        } else if(text::trim(line).empty()) {
            flush();
        } else {
            pending.push_back(line);
        }
    }
    flush();
    return blocks;
}

// ---------------------------------------------------------------------------

CaptionDetection detect_caption_blocks(std::span<const TextBlock> blocks) {
    static const std::regex caption_re(
        "^(?:(figure|fig\\.?)|(table|tab\\.?))\\s*([a-z]?\\d+)\\s*[.:]\\s*",
        std::regex::ECMAScript | std::regex::icase);
    CaptionDetection out;
    std::set<std::pair<bool, std::string>> seen;
    for(std::size_t i = 0; i < blocks.size(); ++i) {
        const auto norm = text::collapse_whitespace(blocks[i].text);
        std::smatch m;
        if(!std::regex_search(norm, m, caption_re, std::regex_constants::match_continuous)) {
            continue;
        }
        const bool is_table = m[2].matched;
        CaptionBlock cb;
        cb.figure_id = normalize_figure_id(m[3].str());
        cb.caption = norm.substr(static_cast<std::size_t>(m.length(0)));
        cb.page = blocks[i].page;
        cb.kind = is_table ? FigureKind::table : FigureKind::chart;
        cb.block_index = i;
        if(!seen.insert({is_table, cb.figure_id}).second) {
            out.warnings.push_back(std::string(is_table ? "table" : "figure") + " " + cb.figure_id +
                                   " captioned again on page " + std::to_string(cb.page) +
                                   "; keeping the first caption");
            continue;
        }
        out.captions.push_back(std::move(cb));
    }
    return out;
}

// ---------------------------------------------------------------------------

IngestResult build_document(std::string_view pdf_bytes, const TextExtractor &extractor,
                            const IngestMeta &meta) {
    std::vector<TextBlock> blocks;
    try {
        blocks = extractor.extract(pdf_bytes);
    } catch(const std::exception &e) {
        throw Error(ErrorCode::ingest_error, "text extraction failed",
                    extractor.name() + ": " + e.what());
    }
    if(blocks.empty()) {
        throw Error(ErrorCode::ingest_error, "extractor returned no text blocks", extractor.name());
    }

    IngestResult result;
    auto &doc = result.document;
    doc.source_digest = sha256_hex(pdf_bytes);
    doc.doc_id = meta.doc_id.empty() ? doc.source_digest.substr(0, 16) : meta.doc_id;

    std::vector<bool> consumed(blocks.size(), false);

    if(blocks.front().page == 1) {
        doc.title = text::collapse_whitespace(blocks.front().text);
        consumed[0] = true;
    }

    for(std::size_t i = 0; i < blocks.size(); ++i) {
        if(consumed[i]) {
            continue;
        }
        const auto lines = split_lines(blocks[i].text);
        if(!text::iequals(text::trim(lines.front()), "abstract")) {
            continue;
        }
        consumed[i] = true;
        std::string rest;
        for(std::size_t l = 1; l < lines.size(); ++l) {
            append_line(rest, lines[l]);
        }
        if(!rest.empty()) {
            doc.abstract = std::move(rest);
        } else if(i + 1 < blocks.size()) {
            doc.abstract = text::collapse_whitespace(blocks[i + 1].text);
            consumed[i + 1] = true;
        }
        break;
    }

    auto detection = detect_caption_blocks(blocks);
    result.warnings = std::move(detection.warnings);
    std::set<std::size_t> caption_blocks;
    for(std::size_t i = 0; i < blocks.size(); ++i) {
        // Repeated captions were dropped from the detection but are still not paragraphs.
        static const std::regex any_caption("^(?:figure|fig\\.?|table|tab\\.?)\\s*[a-z]?\\d+\\s*[.:]",
                                            std::regex::ECMAScript | std::regex::icase);
        if(!consumed[i] && std::regex_search(text::collapse_whitespace(blocks[i].text), any_caption,
                                             std::regex_constants::match_continuous)) {
            caption_blocks.insert(i);
        }
    }

    for(const auto &cb : detection.captions) {
        consumed[cb.block_index] = true;
        if(cb.kind == FigureKind::table) {
            ++result.tables_excluded;
            continue;
        }
        FigureRecord fig;
        fig.id = cb.figure_id;
        fig.kind = FigureKind::chart;
        fig.caption = cb.caption;
        fig.page = cb.page;

        const auto &cap_block = blocks[cb.block_index];
        if(cap_block.bbox) {
            // Text inside the figure: bbox-carrying blocks directly above the
            // caption on the same page.
            std::optional<Region> region;
            for(std::size_t j = cb.block_index; j-- > 0;) {
                const auto &b = blocks[j];
                if(consumed[j] || b.page != cb.page || !b.bbox || b.bbox->y2 > cap_block.bbox->y1 ||
                   !overlaps_horizontally(*b.bbox, *cap_block.bbox) ||
                   text::word_count(b.text) > max_figure_block_words) {
                    break;
                }
                consumed[j] = true;
                if(!region) {
                    region = *b.bbox;
                } else {
                    region->x1 = std::min(region->x1, b.bbox->x1);
                    region->y1 = std::min(region->y1, b.bbox->y1);
                    region->x2 = std::max(region->x2, b.bbox->x2);
                    region->y2 = std::max(region->y2, b.bbox->y2);
                }
                std::vector<std::string> tokens;
                for(auto w : text::split_words(b.text)) {
                    tokens.emplace_back(w);
                }
                fig.figure_text.insert(fig.figure_text.begin(), tokens.begin(), tokens.end());
            }
            fig.region = region;
        }
        doc.figures.push_back(std::move(fig));
    }
    for(auto i : caption_blocks) {
        consumed[i] = true;
    }

    if(doc.figures.empty()) {
        result.warnings.push_back("no figure captions detected");
    }
    if(result.tables_excluded > 0) {
        result.warnings.push_back(std::to_string(result.tables_excluded) +
                                  " table caption(s) excluded");
    }

    std::vector<std::string> paragraphs;
    for(std::size_t i = 0; i < blocks.size(); ++i) {
        if(consumed[i]) {
            continue;
        }
        auto parts = block_paragraphs(blocks[i].text);
        for(std::size_t k = 0; k < parts.size(); ++k) {
            // A block opening in lowercase continues an unfinished paragraph
            // (typically across a column or page break).
            if(k == 0 && !paragraphs.empty() && !ends_sentence(paragraphs.back()) &&
               is_lower(parts[k].front())) {
                append_line(paragraphs.back(), parts[k]);
                continue;
            }
            paragraphs.push_back(std::move(parts[k]));
        }
    }
    for(std::size_t i = 0; i < paragraphs.size(); ++i) {
        doc.paragraphs.push_back(Paragraph{i, std::move(paragraphs[i]), {}});
    }
    link_paragraphs(doc);
    return result;
}

} // namespace capassist
