// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/http_client.hpp>
#include <capassist/model.hpp>

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <semaphore>
#include <span>
#include <string>
#include <string_view>

namespace capassist {

inline constexpr std::size_t rating_paragraph_cap = 4000;

struct RatingContext {
    std::string paragraph; // figure-mentioning paragraphs, may be empty
    std::string caption;   // non-empty
};

// Cuts `s` to at most `cap` bytes, preferring the end of the last complete
// sentence inside the limit; falls back to a UTF-8-safe hard cut.
std::string truncate_at_sentence(std::string_view s, std::size_t cap);

// Paragraph texts joined in document order, capped at `cap` bytes.
RatingContext make_rating_context(std::span<const Paragraph> mention_paragraphs,
                                  std::string caption, std::size_t cap = rating_paragraph_cap);

// The rating prompt with its two placeholders, "[paragraph]" and "[caption]".
// Rendering substitutes them verbatim: no quoting, escaping, or trimming.
class PromptTemplate {
public:
    // Throws ValidationError unless each placeholder occurs exactly once.
    static PromptTemplate from_text(std::string text);
    static PromptTemplate load_file(const std::string &path);
    static const PromptTemplate &builtin();

    std::string render(const RatingContext &ctx) const;
    const std::string &text() const { return text_; }

private:
    std::string text_;
    std::size_t paragraph_pos_ = 0;
    std::size_t caption_pos_ = 0;
};

std::string build_prompt(const RatingContext &ctx);

struct ParsedRating {
    int score = 0;
    std::string explanation;
};

// Score: the first standalone integer in [1,6] after the word "rate"/"rating"
// (any case), else the first standalone integer in [1,6] anywhere. The
// explanation is the raw text with a leading "Rating: N." label removed.
// Throws Error(parse_error) carrying the raw text when no score is found.
ParsedRating parse_rating_response(std::string_view raw);

struct RatingRequest {
    const RatingContext &context;
    const std::string &prompt;
    const AspectReport *report = nullptr;
    int attempt = 0;
};

class RatingBackend {
public:
    virtual ~RatingBackend() = default;
    virtual std::string respond(const RatingRequest &request) = 0;
    virtual std::string backend_id() const = 0;
    // Whether the raw response is kept on the resulting CaptionRating.
    virtual bool retains_raw_response() const { return false; }
};

// Offline stand-in: 1 + number of satisfied content aspects.
int heuristic_score(const AspectReport &report);
std::string heuristic_explanation(const AspectReport &report);

class HeuristicRatingBackend final : public RatingBackend {
public:
    static constexpr std::string_view id = "heuristic";

    // Requires request.report.
    std::string respond(const RatingRequest &request) override;
    std::string backend_id() const override { return std::string(id); }
};

struct HostedChatConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string api_key;
    std::string model = "gpt-3.5-turbo";
    std::chrono::milliseconds timeout{30000};
    int max_in_flight = 4;

    // CAPASSIST_RATING_ENDPOINT, CAPASSIST_RATING_MODEL, CAPASSIST_RATING_TIMEOUT_MS,
    // CAPASSIST_RATING_MAX_IN_FLIGHT, and CAPASSIST_RATING_API_KEY or OPENAI_API_KEY.
    static HostedChatConfig from_env();
    static HostedChatConfig from_env(HostedChatConfig base);
};

// Chat-completion backend: the prompt is sent as a single user message.
// Responses are memoized per prompt for the lifetime of the object.
class HostedChatBackend final : public RatingBackend {
public:
    explicit HostedChatBackend(HostedChatConfig config);

    std::string respond(const RatingRequest &request) override;
    std::string backend_id() const override { return "hosted:" + config_.model; }
    bool retains_raw_response() const override { return true; }

    const HostedChatConfig &config() const { return config_; }

private:
    HostedChatConfig config_;
    std::counting_semaphore<1024> in_flight_;
    std::mutex memo_mutex_;
    std::map<std::string, std::string> memo_;
};

// Rates a caption. Empty captions throw Error(empty_caption). A response that
// cannot be parsed is retried once; transport or repeated parse failures throw
// Error(rating_error).
CaptionRating rate(const RatingContext &ctx, RatingBackend &backend,
                   const AspectReport *report = nullptr,
                   const PromptTemplate &prompt = PromptTemplate::builtin());

// As rate(), but on a rating_error from `primary` the `fallback` backend is
// used and the result carries the fallback's backend id.
CaptionRating rate_with_fallback(const RatingContext &ctx, RatingBackend &primary,
                                 RatingBackend *fallback, const AspectReport *report,
                                 const PromptTemplate &prompt = PromptTemplate::builtin());

} // namespace capassist
