// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/aspects.hpp>
#include <capassist/errors.hpp>
#include <capassist/http_client.hpp>
#include <capassist/kvconfig.hpp>
#include <capassist/model.hpp>
#include <capassist/rating.hpp>

#include <cstddef>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

struct DecodeParams {
    int num_beams = 5;
    std::optional<std::size_t> max_words;
};

struct GenerationConfig {
    std::string version;
    double mention_weight = 2.0;
    double position_weight = 1.0;
    double lexicon_weight = 1.0;
    std::size_t long_min_words = 30;
    std::size_t short_max_words = 30;
    std::vector<std::string> abbreviations;
    std::vector<std::string> prefix_strip_patterns;

    static GenerationConfig from_config(const KvConfig &cfg);
    static GenerationConfig load_file(const std::string &path);
    static const GenerationConfig &builtin();
};

struct Sentence {
    std::string text;       // exact substring of its paragraph
    std::size_t paragraph;  // index into the input list
    std::size_t position;   // sentence index within the paragraph
    std::size_t order;      // global document order
};

// Splits on ., ! or ? followed by whitespace and an uppercase letter, unless
// the period closes one of `abbreviations` ("Fig.", "et al.", "e.g.").
std::vector<std::string> split_sentences(std::string_view paragraph,
                                         std::span<const std::string> abbreviations);

struct ScoredSentence {
    Sentence sentence;
    double score = 0;
};

// Sentence ranking used by the extractive generator. Highest score first;
// equal scores keep document order.
class SentenceScorer {
public:
    SentenceScorer();
    SentenceScorer(GenerationConfig config, const AspectLexicons &lexicons);

    std::vector<ScoredSentence> score(std::span<const std::string> paragraphs,
                                      std::string_view figure_id) const;

    // Removes a leading figure reference ("Figure 3 shows that ...") and
    // capitalizes what remains. Returns `sentence` unchanged if no pattern matches.
    std::string strip_prefix(std::string_view sentence) const;

    const GenerationConfig &config() const { return config_; }

private:
    GenerationConfig config_;
    RuleAspectBackend rules_;
    std::vector<std::regex> prefixes_;
};

std::vector<ScoredSentence> score_sentences(std::span<const std::string> paragraphs,
                                            std::string_view figure_id);

struct GenerationRequest {
    const FigureRecord &figure;
    std::span<const Paragraph> paragraphs;
    Variant variant;
    DecodeParams params;
};

class GenerationBackend {
public:
    virtual ~GenerationBackend() = default;
    virtual std::string generate(const GenerationRequest &request) const = 0;
    virtual std::string backend_id() const = 0;
};

// Selects sentences from the figure-mentioning paragraphs; never invents text.
//   short: the top sentence, prefix-stripped, at most short_max_words words
//          (or params.max_words when smaller).
//   long:  top sentences, emitted in document order, added until the total
//          reaches long_min_words or the material runs out.
class ExtractiveBackend final : public GenerationBackend {
public:
    static constexpr std::string_view id = "extractive";

    ExtractiveBackend() = default;
    explicit ExtractiveBackend(SentenceScorer scorer) : scorer_(std::move(scorer)) {}

    std::string generate(const GenerationRequest &request) const override;
    std::string backend_id() const override { return std::string(id); }

private:
    SentenceScorer scorer_;
};

// Summarization model behind HTTP:
//   POST {paragraphs, variant, num_beams, max_words} -> {caption}
class HostedGenerationBackend final : public GenerationBackend {
public:
    explicit HostedGenerationBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::string generate(const GenerationRequest &request) const override;
    std::string backend_id() const override { return "hosted-generator:" + endpoint_.url; }

private:
    HttpEndpoint endpoint_;
};

// Throws Error(generation_error); "no source material" when the extractive
// backend has no mention paragraphs.
GeneratedCaption generate(const FigureRecord &figure, std::span<const Paragraph> mention_paragraphs,
                          Variant variant, const GenerationBackend &backend,
                          const DecodeParams &params = {});

struct VariantOutcome {
    std::optional<GeneratedCaption> caption;
    std::optional<Error> error;

    bool ok() const { return caption.has_value(); }
};

struct CaptionPair {
    VariantOutcome long_caption;
    VariantOutcome short_caption;
};

struct GenerationBackends {
    const GenerationBackend &long_backend;
    const GenerationBackend &short_backend;
};

// Aspect analysis plus rating for one caption, with optional fallbacks for
// each stage. Holds references only; the backends must outlive it.
class CaptionRater {
public:
    CaptionRater(const AspectBackend &aspects, RatingBackend &rating,
                 const AspectBackend *aspect_fallback = nullptr, RatingBackend *rating_fallback = nullptr,
                 const PromptTemplate &prompt = PromptTemplate::builtin());

    AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                         std::span<const Paragraph> paragraphs) const;

    struct Result {
        AspectReport report;
        CaptionRating rating;
    };
    Result evaluate(std::string_view caption, const FigureRecord &figure,
                    std::span<const Paragraph> paragraphs) const;

private:
    const AspectBackend &aspects_;
    RatingBackend &rating_;
    const AspectBackend *aspect_fallback_;
    RatingBackend *rating_fallback_;
    const PromptTemplate &prompt_;
};

// Both variants, each rated. One variant failing leaves the other intact.
// Runs the two variants concurrently.
CaptionPair generate_pair_with_ratings(const FigureRecord &figure,
                                       std::span<const Paragraph> mention_paragraphs,
                                       GenerationBackends backends, const CaptionRater &rater,
                                       const DecodeParams &params = {});

} // namespace capassist
