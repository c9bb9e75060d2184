// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/assets.hpp>
#include <capassist/generation.hpp>
#include <capassist/mentions.hpp>
#include <capassist/text.hpp>

#include <algorithm>
#include <cctype>
#include <future>
#include <set>

namespace capassist {

namespace {

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool ends_with_abbreviation(std::string_view upto, std::span<const std::string> abbreviations) {
    for(const auto &abbr : abbreviations) {
        if(abbr.size() > upto.size()) {
            continue;
        }
        auto tail = upto.substr(upto.size() - abbr.size());
        if(!text::iequals(tail, abbr)) {
            continue;
        }
        auto start = upto.size() - abbr.size();
        if(start == 0 || !is_alpha(upto[start - 1])) {
            return true;
        }
    }
    return false;
}

// Sentences as [begin, end) offsets into `s`, trimmed.
std::vector<std::pair<std::size_t, std::size_t>>
sentence_bounds(std::string_view s, std::span<const std::string> abbreviations) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    auto push = [&](std::size_t b, std::size_t e) {
        while(b < e && is_space(s[b])) ++b;
        while(e > b && is_space(s[e - 1])) --e;
        if(e > b) out.emplace_back(b, e);
    };
    std::size_t start = 0;
    for(std::size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if(c != '.' && c != '!' && c != '?') {
            continue;
        }
        std::size_t j = i + 1;
        // Closing quotes or brackets stay with the sentence they end.
        while(j < s.size() && (s[j] == '"' || s[j] == '\'' || s[j] == ')' || s[j] == ']')) {
            ++j;
        }
        if(j >= s.size() || !is_space(s[j])) {
            continue;
        }
        std::size_t k = j;
        while(k < s.size() && is_space(s[k])) {
            ++k;
        }
        if(k >= s.size() || !is_upper(s[k])) {
            continue;
        }
        if(c == '.' && ends_with_abbreviation(s.substr(0, i + 1), abbreviations)) {
            continue;
        }
        push(start, j);
        start = k;
        i = k - 1;
    }
    push(start, s.size());
    return out;
}

std::size_t nonneg(double v) { return v < 0 ? 0 : static_cast<std::size_t>(v); }

std::vector<std::string> paragraph_texts(std::span<const Paragraph> paragraphs) {
    std::vector<std::string> out;
    out.reserve(paragraphs.size());
    for(const auto &p : paragraphs) {
        out.push_back(p.text);
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------

GenerationConfig GenerationConfig::from_config(const KvConfig &cfg) {
    GenerationConfig gc;
    gc.version = cfg.has("version") ? cfg.scalar("version") : std::string("unversioned");
    if(auto v = cfg.number_or("mention_weight")) gc.mention_weight = *v;
    if(auto v = cfg.number_or("position_weight")) gc.position_weight = *v;
    if(auto v = cfg.number_or("lexicon_weight")) gc.lexicon_weight = *v;
    if(auto v = cfg.number_or("long_min_words")) gc.long_min_words = nonneg(*v);
    if(auto v = cfg.number_or("short_max_words")) gc.short_max_words = nonneg(*v);
    gc.abbreviations = cfg.comma_list("abbreviations");
    gc.prefix_strip_patterns = cfg.values("prefix_strip_pattern");
    return gc;
}

GenerationConfig GenerationConfig::load_file(const std::string &path) {
    return from_config(KvConfig::load_file(path));
}

const GenerationConfig &GenerationConfig::builtin() {
    static const GenerationConfig gc =
        from_config(KvConfig::parse(assets::generation_conf(), "builtin:generation.conf"));
    return gc;
}

std::vector<std::string> split_sentences(std::string_view paragraph,
                                         std::span<const std::string> abbreviations) {
    std::vector<std::string> out;
    for(auto [b, e] : sentence_bounds(paragraph, abbreviations)) {
        out.emplace_back(paragraph.substr(b, e - b));
    }
    return out;
}

// ---------------------------------------------------------------------------

SentenceScorer::SentenceScorer() : SentenceScorer(GenerationConfig::builtin(), AspectLexicons::builtin()) {}

SentenceScorer::SentenceScorer(GenerationConfig config, const AspectLexicons &lexicons)
    : config_(std::move(config)), rules_(lexicons) {
    for(const auto &p : config_.prefix_strip_patterns) {
        try {
            prefixes_.emplace_back(p, std::regex::ECMAScript | std::regex::icase);
        } catch(const std::regex_error &e) {
            throw ValidationError(std::string("invalid prefix_strip_pattern: ") + e.what(), p);
        }
    }
}

std::vector<ScoredSentence> SentenceScorer::score(std::span<const std::string> paragraphs,
                                                  std::string_view figure_id) const {
    std::vector<ScoredSentence> out;
    const std::set<std::string> target{std::string(figure_id)};
    std::size_t order = 0;
    for(std::size_t pi = 0; pi < paragraphs.size(); ++pi) {
        const auto sentences = split_sentences(paragraphs[pi], config_.abbreviations);
        for(std::size_t si = 0; si < sentences.size(); ++si) {
            const auto &s = sentences[si];
            const double mention = find_mentions(s, target).empty() ? 0.0 : 1.0;
            const double position = 1.0 / (1.0 + static_cast<double>(si));
            int cues = 0;
            cues += rules_.check_relation(s).satisfied == Satisfied::yes;
            cues += rules_.check_stats(s).satisfied == Satisfied::yes;
            cues += rules_.check_takeaway(s).satisfied == Satisfied::yes;
            cues += rules_.check_visual(s).satisfied == Satisfied::yes;
            const double lexicon = cues / 4.0;
            const double score = config_.mention_weight * mention + config_.position_weight * position +
                                 config_.lexicon_weight * lexicon;
            out.push_back({Sentence{s, pi, si, order++}, score});
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const ScoredSentence &a, const ScoredSentence &b) { return a.score > b.score; });
    return out;
}

std::string SentenceScorer::strip_prefix(std::string_view sentence) const {
    using It = std::string_view::const_iterator;
    for(const auto &re : prefixes_) {
        std::match_results<It> m;
        if(std::regex_search(sentence.begin(), sentence.end(), m, re,
                             std::regex_constants::match_continuous) &&
           m.length(0) > 0) {
            std::string rest(text::trim(sentence.substr(static_cast<std::size_t>(m.length(0)))));
            if(rest.empty()) {
                return std::string(sentence);
            }
            rest[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(rest[0])));
            return rest;
        }
    }
    return std::string(sentence);
}

std::vector<ScoredSentence> score_sentences(std::span<const std::string> paragraphs,
                                            std::string_view figure_id) {
    static const SentenceScorer scorer;
    return scorer.score(paragraphs, figure_id);
}

// ---------------------------------------------------------------------------

std::string ExtractiveBackend::generate(const GenerationRequest &request) const {
    const auto texts = paragraph_texts(request.paragraphs);
    const auto ranked = scorer_.score(texts, request.figure.id);
    if(ranked.empty()) {
        throw Error(ErrorCode::generation_error, "no source material", request.figure.id);
    }
    const auto &cfg = scorer_.config();

    if(request.variant == Variant::short_caption) {
        auto cap = cfg.short_max_words;
        if(request.params.max_words) {
            cap = std::min(cap, *request.params.max_words);
        }
        const auto stripped = scorer_.strip_prefix(ranked.front().sentence.text);
        return std::string(text::first_words(stripped, cap));
    }

    std::vector<const Sentence *> picked;
    std::size_t words = 0;
    for(const auto &r : ranked) {
        if(words >= cfg.long_min_words) {
            break;
        }
        picked.push_back(&r.sentence);
        words += text::word_count(r.sentence.text);
    }
    std::sort(picked.begin(), picked.end(),
              [](const Sentence *a, const Sentence *b) { return a->order < b->order; });
    std::vector<std::string> parts;
    for(const auto *s : picked) {
        parts.push_back(s->text);
    }
    auto out = text::join(parts, " ");
    if(request.params.max_words) {
        out = std::string(text::first_words(out, *request.params.max_words));
    }
    return out;
}

std::string HostedGenerationBackend::generate(const GenerationRequest &request) const {
    nlohmann::json body;
    body["paragraphs"] = paragraph_texts(request.paragraphs);
    body["variant"] = to_string(request.variant);
    body["num_beams"] = request.params.num_beams;
    if(request.params.max_words) {
        body["max_words"] = *request.params.max_words;
    } else {
        body["max_words"] = nullptr;
    }
    const auto res = post_json(endpoint_, body);
    auto it = res.find("caption");
    if(it == res.end() || !it->is_string()) {
        throw Error(ErrorCode::transport_error, "generator response lacks 'caption'", res.dump());
    }
    auto caption = std::string(text::trim(it->get<std::string>()));
    if(request.params.max_words) {
        caption = std::string(text::first_words(caption, *request.params.max_words));
    }
    return caption;
}

GeneratedCaption generate(const FigureRecord &figure, std::span<const Paragraph> mention_paragraphs,
                          Variant variant, const GenerationBackend &backend,
                          const DecodeParams &params) {
    if(params.num_beams < 1) {
        throw Error(ErrorCode::invalid_argument, "num_beams must be >= 1");
    }
    std::string caption;
    try {
        caption = backend.generate(GenerationRequest{figure, mention_paragraphs, variant, params});
    } catch(const Error &e) {
        if(e.code() == ErrorCode::generation_error) {
            throw;
        }
        throw Error(ErrorCode::generation_error, e.what(), backend.backend_id() + ": " + e.detail());
    } catch(const std::exception &e) {
        throw Error(ErrorCode::generation_error, e.what(), backend.backend_id());
    }
    return GeneratedCaption{variant, std::move(caption), std::nullopt, backend.backend_id()};
}

// ---------------------------------------------------------------------------

CaptionRater::CaptionRater(const AspectBackend &aspects, RatingBackend &rating,
                           const AspectBackend *aspect_fallback, RatingBackend *rating_fallback,
                           const PromptTemplate &prompt)
    : aspects_(aspects), rating_(rating), aspect_fallback_(aspect_fallback),
      rating_fallback_(rating_fallback), prompt_(prompt) {}

AspectReport CaptionRater::analyze(std::string_view caption, const FigureRecord &figure,
                                   std::span<const Paragraph> paragraphs) const {
    try {
        return capassist::analyze(caption, figure, paragraphs, aspects_);
    } catch(const Error &) {
        if(aspect_fallback_ == nullptr) {
            throw;
        }
        return capassist::analyze(caption, figure, paragraphs, *aspect_fallback_);
    }
}

CaptionRater::Result CaptionRater::evaluate(std::string_view caption, const FigureRecord &figure,
                                            std::span<const Paragraph> paragraphs) const {
    auto report = analyze(caption, figure, paragraphs);
    auto ctx = make_rating_context(paragraphs, std::string(caption));
    auto rating = rate_with_fallback(ctx, rating_, rating_fallback_, &report, prompt_);
    return Result{std::move(report), std::move(rating)};
}

CaptionPair generate_pair_with_ratings(const FigureRecord &figure,
                                       std::span<const Paragraph> mention_paragraphs,
                                       GenerationBackends backends, const CaptionRater &rater,
                                       const DecodeParams &params) {
    auto run = [&](Variant v, const GenerationBackend &backend) {
        VariantOutcome out;
        try {
            auto gc = generate(figure, mention_paragraphs, v, backend, params);
            if(!text::trim(gc.text).empty()) {
                gc.rating = rater.evaluate(gc.text, figure, mention_paragraphs).rating;
            }
            out.caption = std::move(gc);
        } catch(const Error &e) {
            out.error = e;
        } catch(const std::exception &e) {
            out.error = Error(ErrorCode::generation_error, e.what());
        }
        return out;
    };
    auto long_future = std::async(std::launch::async, run, Variant::long_caption,
                                  std::cref(backends.long_backend));
    CaptionPair pair;
    pair.short_caption = run(Variant::short_caption, backends.short_backend);
    pair.long_caption = long_future.get();
    return pair;
}

} // namespace capassist
