// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/assets.hpp>
#include <capassist/errors.hpp>
#include <capassist/rating.hpp>
#include <capassist/text.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>

namespace capassist {

namespace {

constexpr std::string_view paragraph_placeholder = "[paragraph]";
constexpr std::string_view caption_placeholder = "[caption]";

bool is_digit(char c) { return c >= '0' && c <= '9'; }

std::size_t count_occurrences(std::string_view hay, std::string_view needle) {
    std::size_t n = 0;
    for(auto pos = hay.find(needle); pos != std::string_view::npos;
        pos = hay.find(needle, pos + needle.size())) {
        ++n;
    }
    return n;
}

// First standalone integer in [1,6] at or after `from`: not adjacent to other
// digits and not part of a decimal.
std::optional<int> first_score(std::string_view s, std::size_t from) {
    for(std::size_t i = from; i < s.size(); ++i) {
        if(!is_digit(s[i])) {
            continue;
        }
        std::size_t j = i;
        while(j < s.size() && is_digit(s[j])) {
            ++j;
        }
        bool glued_before = i > 0 && (is_digit(s[i - 1]) || s[i - 1] == '.');
        bool decimal_after = j + 1 < s.size() && s[j] == '.' && is_digit(s[j + 1]);
        if(!glued_before && !decimal_after && j - i == 1 && s[i] >= '1' && s[i] <= '6') {
            return s[i] - '0';
        }
        i = j;
    }
    return std::nullopt;
}

std::string_view aspect_label(Aspect a) {
    switch(a) {
    case Aspect::ocr: return "OCR";
    case Aspect::relation: return "relation";
    case Aspect::stats: return "stats";
    case Aspect::takeaway: return "takeaway";
    case Aspect::visual: return "visual";
    case Aspect::helpfulness: return "helpfulness";
    }
    return "";
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if(!in) {
        throw Error(ErrorCode::invalid_argument, "cannot open prompt template", path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string truncate_at_sentence(std::string_view s, std::size_t cap) {
    if(s.size() <= cap) {
        return std::string(s);
    }
    for(std::size_t i = cap; i-- > 0;) {
        char c = s[i];
        if((c == '.' || c == '!' || c == '?') &&
           (i + 1 == s.size() || std::isspace(static_cast<unsigned char>(s[i + 1])))) {
            return std::string(s.substr(0, i + 1));
        }
    }
    return std::string(s.substr(0, text::utf8_floor(s, cap)));
}

RatingContext make_rating_context(std::span<const Paragraph> mention_paragraphs,
                                  std::string caption, std::size_t cap) {
    std::vector<std::string> parts;
    for(const auto &p : mention_paragraphs) {
        parts.push_back(p.text);
    }
    return RatingContext{truncate_at_sentence(text::join(parts, "\n"), cap), std::move(caption)};
}

// ---------------------------------------------------------------------------

PromptTemplate PromptTemplate::from_text(std::string body) {
    if(count_occurrences(body, paragraph_placeholder) != 1 ||
       count_occurrences(body, caption_placeholder) != 1) {
        throw ValidationError("prompt template must contain [paragraph] and [caption] exactly once",
                              "rating_prompt");
    }
    PromptTemplate t;
    t.paragraph_pos_ = body.find(paragraph_placeholder);
    t.caption_pos_ = body.find(caption_placeholder);
    t.text_ = std::move(body);
    return t;
}

PromptTemplate PromptTemplate::load_file(const std::string &path) {
    return from_text(read_file(path));
}

const PromptTemplate &PromptTemplate::builtin() {
    static const PromptTemplate t = from_text(std::string(assets::rating_prompt()));
    return t;
}

std::string PromptTemplate::render(const RatingContext &ctx) const {
    // Substitute in one pass so placeholder-like text inside the inputs stays literal.
    struct Slot {
        std::size_t pos;
        std::size_t len;
        const std::string *value;
    };
    Slot first{paragraph_pos_, paragraph_placeholder.size(), &ctx.paragraph};
    Slot second{caption_pos_, caption_placeholder.size(), &ctx.caption};
    if(second.pos < first.pos) {
        std::swap(first, second);
    }
    std::string out;
    out.reserve(text_.size() + ctx.paragraph.size() + ctx.caption.size());
    out.append(text_, 0, first.pos);
    out.append(*first.value);
    out.append(text_, first.pos + first.len, second.pos - first.pos - first.len);
    out.append(*second.value);
    out.append(text_, second.pos + second.len);
    return out;
}

std::string build_prompt(const RatingContext &ctx) { return PromptTemplate::builtin().render(ctx); }

// ---------------------------------------------------------------------------

ParsedRating parse_rating_response(std::string_view raw) {
    static const std::regex rate_word("\\brat(?:e|ed|es|ing)\\b", std::regex::ECMAScript | std::regex::icase);
    static const std::regex label(
        "^\\s*(?:\\*\\*)?\\s*(?:rating|score)\\s*(?:\\*\\*)?\\s*[:=-]\\s*(?:\\*\\*)?\\s*\\d+"
        "(?:\\s*(?:/|out of)\\s*6)?\\s*(?:\\*\\*)?\\s*[.,;:-]?\\s*",
        std::regex::ECMAScript | std::regex::icase);

    const auto trimmed = text::trim(raw);
    if(trimmed.empty()) {
        throw Error(ErrorCode::parse_error, "empty rating response", std::string(raw));
    }
    std::optional<int> score;
    using It = std::string_view::const_iterator;
    std::match_results<It> m;
    if(std::regex_search(trimmed.begin(), trimmed.end(), m, rate_word)) {
        score = first_score(trimmed, static_cast<std::size_t>(m.position(0) + m.length(0)));
    }
    if(!score) {
        score = first_score(trimmed, 0);
    }
    if(!score) {
        throw Error(ErrorCode::parse_error, "no rating between 1 and 6 in response", std::string(raw));
    }

    std::string explanation(trimmed);
    if(std::regex_search(trimmed.begin(), trimmed.end(), m, label)) {
        auto rest = text::trim(trimmed.substr(static_cast<std::size_t>(m.length(0))));
        if(!rest.empty()) {
            explanation = std::string(rest);
        }
    }
    return ParsedRating{*score, std::move(explanation)};
}

// ---------------------------------------------------------------------------

int heuristic_score(const AspectReport &report) {
    return 1 + static_cast<int>(content_aspects_satisfied(report));
}

std::string heuristic_explanation(const AspectReport &report) {
    std::vector<std::string> covered, missing;
    for(auto a : content_aspects) {
        const auto s = report[a].satisfied;
        if(s == Satisfied::yes) {
            covered.emplace_back(aspect_label(a));
        } else if(s == Satisfied::unknown) {
            missing.push_back(std::string(aspect_label(a)) + " (no figure text available)");
        } else {
            missing.emplace_back(aspect_label(a));
        }
    }
    std::string out;
    if(missing.empty()) {
        out = "The caption covers all five content aspects: " + text::join(covered, ", ") + ".";
    } else if(covered.empty()) {
        out = "The caption covers none of the content aspects. Missing: " + text::join(missing, ", ") + ".";
    } else {
        out = "The caption covers " + text::join(covered, ", ") + ". Missing: " +
              text::join(missing, ", ") + ".";
    }
    return out;
}

std::string HeuristicRatingBackend::respond(const RatingRequest &request) {
    if(request.report == nullptr) {
        throw Error(ErrorCode::rating_error, "heuristic rating needs an aspect report",
                    std::string(id));
    }
    return "Rating: " + std::to_string(heuristic_score(*request.report)) + ". " +
           heuristic_explanation(*request.report);
}

// ---------------------------------------------------------------------------

HostedChatConfig HostedChatConfig::from_env() { return from_env(HostedChatConfig{}); }

HostedChatConfig HostedChatConfig::from_env(HostedChatConfig base) {
    auto env = [](const char *name) -> const char * {
        const char *v = std::getenv(name);
        return (v != nullptr && *v != '\0') ? v : nullptr;
    };
    if(auto v = env("CAPASSIST_RATING_ENDPOINT")) base.endpoint = v;
    if(auto v = env("CAPASSIST_RATING_MODEL")) base.model = v;
    if(auto v = env("OPENAI_API_KEY")) base.api_key = v;
    if(auto v = env("CAPASSIST_RATING_API_KEY")) base.api_key = v;
    if(auto v = env("CAPASSIST_RATING_TIMEOUT_MS")) base.timeout = std::chrono::milliseconds(std::atoll(v));
    if(auto v = env("CAPASSIST_RATING_MAX_IN_FLIGHT")) base.max_in_flight = std::atoi(v);
    return base;
}

HostedChatBackend::HostedChatBackend(HostedChatConfig config)
    : config_(std::move(config)), in_flight_(std::clamp(config_.max_in_flight, 1, 1024)) {}

std::string HostedChatBackend::respond(const RatingRequest &request) {
    if(request.attempt == 0) {
        std::lock_guard lock(memo_mutex_);
        if(auto it = memo_.find(request.prompt); it != memo_.end()) {
            return it->second;
        }
    }

    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}});

    HttpEndpoint ep{config_.endpoint, {}, config_.timeout};
    if(!config_.api_key.empty()) {
        ep.headers.emplace_back("Authorization", "Bearer " + config_.api_key);
    }

    nlohmann::json res;
    in_flight_.acquire();
    try {
        res = post_json(ep, body);
    } catch(...) {
        in_flight_.release();
        throw;
    }
    in_flight_.release();

    std::string content;
    try {
        content = res.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch(const nlohmann::json::exception &) {
        throw Error(ErrorCode::transport_error, "unexpected chat completion payload", res.dump());
    }
    std::lock_guard lock(memo_mutex_);
    memo_[request.prompt] = content;
    return content;
}

// ---------------------------------------------------------------------------

CaptionRating rate(const RatingContext &ctx, RatingBackend &backend, const AspectReport *report,
                   const PromptTemplate &prompt) {
    if(text::trim(ctx.caption).empty()) {
        throw Error(ErrorCode::empty_caption, "cannot rate an empty caption");
    }
    const auto prompt_text = prompt.render(ctx);
    std::string last_raw;
    for(int attempt = 0; attempt < 2; ++attempt) {
        RatingRequest req{ctx, prompt_text, report, attempt};
        try {
            last_raw = backend.respond(req);
        } catch(const Error &e) {
            throw Error(ErrorCode::rating_error, std::string("rating backend failed: ") + e.what(),
                        backend.backend_id() + ": " + e.detail());
        } catch(const std::exception &e) {
            throw Error(ErrorCode::rating_error, std::string("rating backend failed: ") + e.what(),
                        backend.backend_id());
        }
        try {
            auto parsed = parse_rating_response(last_raw);
            CaptionRating r;
            r.score = parsed.score;
            r.explanation = std::move(parsed.explanation);
            r.backend_id = backend.backend_id();
            if(backend.retains_raw_response()) {
                r.raw_response = last_raw;
            }
            return r;
        } catch(const Error &) {
            // retried once below
        }
    }
    throw Error(ErrorCode::rating_error, "rating response could not be parsed", last_raw);
}

CaptionRating rate_with_fallback(const RatingContext &ctx, RatingBackend &primary,
                                 RatingBackend *fallback, const AspectReport *report,
                                 const PromptTemplate &prompt) {
    try {
        return rate(ctx, primary, report, prompt);
    } catch(const Error &e) {
        if(e.code() != ErrorCode::rating_error || fallback == nullptr) {
            throw;
        }
        return rate(ctx, *fallback, report, prompt);
    }
}

} // namespace capassist
