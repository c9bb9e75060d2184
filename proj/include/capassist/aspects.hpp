// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/http_client.hpp>
#include <capassist/kvconfig.hpp>
#include <capassist/model.hpp>

#include <memory>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

// Tunable cue lists for the rule backend. Loaded from a lexicon config file
// (assets/lexicons.conf is the shipped sample; the same text is compiled in as
// the built-in default).
struct AspectLexicons {
    std::string version;
    std::vector<std::string> relation_patterns;
    std::vector<std::string> takeaway_phrases;
    std::vector<std::string> visual_words;
    std::string number_pattern;
    std::vector<std::string> figure_ref_patterns;
    std::size_t ocr_min_token_length = 3;
    std::size_t helpfulness_min_words = 8;
    std::size_t helpfulness_min_aspects = 2;

    // Throws ValidationError when a required list is missing or empty.
    static AspectLexicons from_config(const KvConfig &cfg);
    static AspectLexicons load_file(const std::string &path);
    static const AspectLexicons &builtin();
};

class AspectBackend {
public:
    virtual ~AspectBackend() = default;
    virtual AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                                 std::span<const Paragraph> paragraphs) const = 0;
    virtual std::string backend_id() const = 0;
};

// Deterministic lexicon/regex checks. Stateless after construction and safe
// to share between threads.
class RuleAspectBackend final : public AspectBackend {
public:
    static constexpr std::string_view id = "rules";
    static constexpr std::string_view helpfulness_id = "rules+composite";

    RuleAspectBackend();
    explicit RuleAspectBackend(const AspectLexicons &lexicons);

    AspectEntry check_ocr(std::string_view caption, std::span<const std::string> figure_text) const;
    AspectEntry check_relation(std::string_view caption) const;
    AspectEntry check_stats(std::string_view caption) const;
    AspectEntry check_takeaway(std::string_view caption) const;
    AspectEntry check_visual(std::string_view caption) const;
    // `report` must already hold the five content aspects.
    AspectEntry check_helpfulness(std::string_view caption, const AspectReport &report) const;

    AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                         std::span<const Paragraph> paragraphs) const override;
    std::string backend_id() const override { return std::string(id); }

    const AspectLexicons &lexicons() const { return lexicons_; }

private:
    AspectEntry match_any(std::string_view caption, const std::vector<std::regex> &patterns) const;

    AspectLexicons lexicons_;
    std::vector<std::regex> relation_;
    std::vector<std::regex> takeaway_;
    std::vector<std::regex> visual_;
    std::regex number_;
    std::vector<std::regex> figure_refs_;
};

// Classifier service reached over HTTP:
//   POST {caption, figure_text, paragraphs} -> {helpfulness: bool, ocr: bool, ...}
class HttpAspectBackend final : public AspectBackend {
public:
    explicit HttpAspectBackend(HttpEndpoint endpoint);

    AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                         std::span<const Paragraph> paragraphs) const override;
    std::string backend_id() const override;

private:
    HttpEndpoint endpoint_;
};

// Runs `backend`; any failure is rethrown as Error(analysis_error) whose detail
// names the backend id and the cause.
AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                     std::span<const Paragraph> paragraphs, const AspectBackend &backend);

// Number of content aspects (ocr, relation, stats, takeaway, visual) that are yes.
std::size_t content_aspects_satisfied(const AspectReport &report);

} // namespace capassist
