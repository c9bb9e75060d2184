// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/assets.hpp>
#include <capassist/errors.hpp>
#include <capassist/text.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace capassist {

namespace {

constexpr auto regex_flags = std::regex::ECMAScript | std::regex::icase | std::regex::optimize;

std::regex compile(const std::string &pattern, const char *what) {
    try {
        return std::regex(pattern, regex_flags);
    } catch(const std::regex_error &e) {
        throw ValidationError(std::string("invalid ") + what + " pattern: " + e.what(), pattern);
    }
}

// Literal phrase -> regex source with word boundaries; inner spaces match any
// whitespace run.
std::string phrase_regex(std::string_view phrase) {
    static constexpr std::string_view special = R"(\^$.|?*+()[]{}/)";
    std::string out = "\\b";
    bool in_space = false;
    for(char c : phrase) {
        if(std::isspace(static_cast<unsigned char>(c))) {
            if(!in_space) {
                out += "\\s+";
            }
            in_space = true;
            continue;
        }
        in_space = false;
        if(special.find(c) != std::string_view::npos) {
            out.push_back('\\');
        }
        out.push_back(c);
    }
    out += "\\b";
    return out;
}

std::vector<std::regex> compile_phrases(const std::vector<std::string> &phrases, const char *what) {
    std::vector<std::regex> out;
    out.reserve(phrases.size());
    for(const auto &p : phrases) {
        out.push_back(compile(phrase_regex(p), what));
    }
    return out;
}

bool token_byte(char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || u >= 0x80;
}

struct Token {
    std::string norm;
    Span span;
};

// Maximal runs of letters/digits (non-ASCII bytes count as letters),
// ASCII case-folded.
std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    while(i < s.size()) {
        if(!token_byte(s[i])) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while(i < s.size() && token_byte(s[i])) {
            ++i;
        }
        out.push_back({text::ascii_lower(s.substr(start, i - start)), {start, i}});
    }
    return out;
}

AspectEntry entry(bool yes, std::vector<Span> evidence = {}) {
    return AspectEntry{yes ? Satisfied::yes : Satisfied::no, std::move(evidence),
                       std::string(RuleAspectBackend::id)};
}

std::size_t positive_size(double v, const char *key) {
    if(v < 0) {
        throw ValidationError(std::string("config key '") + key + "' must be >= 0", key);
    }
    return static_cast<std::size_t>(v);
}

} // namespace

// ---------------------------------------------------------------------------

AspectLexicons AspectLexicons::from_config(const KvConfig &cfg) {
    AspectLexicons lx;
    lx.version = cfg.has("version") ? cfg.scalar("version") : std::string("unversioned");
    lx.relation_patterns = cfg.values("relation_pattern");
    lx.takeaway_phrases = cfg.comma_list("takeaway_phrases");
    lx.visual_words = cfg.comma_list("visual_words");
    lx.number_pattern = cfg.has("number_pattern") ? cfg.scalar("number_pattern") : std::string();
    lx.figure_ref_patterns = cfg.values("figure_ref_pattern");
    if(auto v = cfg.number_or("ocr_min_token_length")) {
        lx.ocr_min_token_length = positive_size(*v, "ocr_min_token_length");
    }
    if(auto v = cfg.number_or("helpfulness_min_words")) {
        lx.helpfulness_min_words = positive_size(*v, "helpfulness_min_words");
    }
    if(auto v = cfg.number_or("helpfulness_min_aspects")) {
        lx.helpfulness_min_aspects = positive_size(*v, "helpfulness_min_aspects");
    }

    auto require_nonempty = [](bool empty, const char *key) {
        if(empty) {
            throw ValidationError(std::string("lexicon '") + key + "' must not be empty", key);
        }
    };
    require_nonempty(lx.relation_patterns.empty(), "relation_pattern");
    require_nonempty(lx.takeaway_phrases.empty(), "takeaway_phrases");
    require_nonempty(lx.visual_words.empty(), "visual_words");
    require_nonempty(lx.number_pattern.empty(), "number_pattern");
    require_nonempty(lx.figure_ref_patterns.empty(), "figure_ref_pattern");
    return lx;
}

AspectLexicons AspectLexicons::load_file(const std::string &path) {
    return from_config(KvConfig::load_file(path));
}

const AspectLexicons &AspectLexicons::builtin() {
    static const AspectLexicons lx =
        from_config(KvConfig::parse(assets::lexicons_conf(), "builtin:lexicons.conf"));
    return lx;
}

// ---------------------------------------------------------------------------

RuleAspectBackend::RuleAspectBackend() : RuleAspectBackend(AspectLexicons::builtin()) {}

RuleAspectBackend::RuleAspectBackend(const AspectLexicons &lexicons)
    : lexicons_(lexicons), number_(compile(lexicons.number_pattern, "number")) {
    for(const auto &p : lexicons_.relation_patterns) {
        relation_.push_back(compile(p, "relation"));
    }
    takeaway_ = compile_phrases(lexicons_.takeaway_phrases, "takeaway");
    visual_ = compile_phrases(lexicons_.visual_words, "visual");
    for(const auto &p : lexicons_.figure_ref_patterns) {
        figure_refs_.push_back(compile(p, "figure reference"));
    }
}

AspectEntry RuleAspectBackend::match_any(std::string_view caption,
                                         const std::vector<std::regex> &patterns) const {
    using It = std::string_view::const_iterator;
    std::vector<Span> evidence;
    for(const auto &re : patterns) {
        for(std::regex_iterator<It> m(caption.begin(), caption.end(), re), end; m != end; ++m) {
            if(m->length(0) == 0) {
                continue;
            }
            auto b = static_cast<std::size_t>(m->position(0));
            evidence.push_back({b, b + static_cast<std::size_t>(m->length(0))});
        }
    }
    std::sort(evidence.begin(), evidence.end(),
              [](const Span &a, const Span &b) { return a.begin < b.begin || (a.begin == b.begin && a.end < b.end); });
    evidence.erase(std::unique(evidence.begin(), evidence.end()), evidence.end());
    bool yes = !evidence.empty();
    return entry(yes, std::move(evidence));
}

AspectEntry RuleAspectBackend::check_ocr(std::string_view caption,
                                         std::span<const std::string> figure_text) const {
    std::set<std::string> vocab;
    for(const auto &tok : figure_text) {
        for(auto &t : tokenize(tok)) {
            vocab.insert(std::move(t.norm));
        }
    }
    if(vocab.empty()) {
        AspectEntry e = entry(false);
        // Without any figure text the aspect cannot be decided.
        if(figure_text.empty() || std::all_of(figure_text.begin(), figure_text.end(),
                                               [](const std::string &s) { return text::trim(s).empty(); })) {
            e.satisfied = Satisfied::unknown;
        }
        return e;
    }
    std::vector<Span> evidence;
    for(const auto &t : tokenize(caption)) {
        if(t.norm.size() >= lexicons_.ocr_min_token_length && vocab.count(t.norm)) {
            evidence.push_back(t.span);
        }
    }
    bool yes = !evidence.empty();
    return entry(yes, std::move(evidence));
}

AspectEntry RuleAspectBackend::check_relation(std::string_view caption) const {
    return match_any(caption, relation_);
}

AspectEntry RuleAspectBackend::check_takeaway(std::string_view caption) const {
    return match_any(caption, takeaway_);
}

AspectEntry RuleAspectBackend::check_visual(std::string_view caption) const {
    return match_any(caption, visual_);
}

AspectEntry RuleAspectBackend::check_stats(std::string_view caption) const {
    using It = std::string_view::const_iterator;
    std::vector<Span> refs;
    for(const auto &re : figure_refs_) {
        for(std::regex_iterator<It> m(caption.begin(), caption.end(), re), end; m != end; ++m) {
            auto b = static_cast<std::size_t>(m->position(0));
            refs.push_back({b, b + static_cast<std::size_t>(m->length(0))});
        }
    }
    auto word_char = [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
    };
    std::vector<Span> evidence;
    for(std::regex_iterator<It> m(caption.begin(), caption.end(), number_), end; m != end; ++m) {
        Span s{static_cast<std::size_t>(m->position(0)),
               static_cast<std::size_t>(m->position(0) + m->length(0))};
        if(s.begin == s.end) {
            continue;
        }
        // Digits glued to a word ("ResNet50", "3D") are identifiers, not statistics.
        if(s.begin > 0 && word_char(caption[s.begin - 1])) {
            continue;
        }
        if(s.end < caption.size() && std::isalpha(static_cast<unsigned char>(caption[s.end]))) {
            continue;
        }
        bool in_ref = std::any_of(refs.begin(), refs.end(), [&](const Span &r) {
            return s.begin < r.end && r.begin < s.end;
        });
        if(!in_ref) {
            evidence.push_back(s);
        }
    }
    bool yes = !evidence.empty();
    return entry(yes, std::move(evidence));
}

AspectEntry RuleAspectBackend::check_helpfulness(std::string_view caption,
                                                 const AspectReport &report) const {
    const bool yes = text::word_count(caption) >= lexicons_.helpfulness_min_words &&
                     content_aspects_satisfied(report) >= lexicons_.helpfulness_min_aspects;
    AspectEntry e = entry(yes);
    e.backend_id = std::string(helpfulness_id);
    return e;
}

AspectReport RuleAspectBackend::analyze(std::string_view caption, const FigureRecord &figure,
                                        std::span<const Paragraph>) const {
    AspectReport r;
    r[Aspect::ocr] = check_ocr(caption, figure.figure_text);
    r[Aspect::relation] = check_relation(caption);
    r[Aspect::stats] = check_stats(caption);
    r[Aspect::takeaway] = check_takeaway(caption);
    r[Aspect::visual] = check_visual(caption);
    r[Aspect::helpfulness] = check_helpfulness(caption, r);
    return r;
}

// ---------------------------------------------------------------------------

HttpAspectBackend::HttpAspectBackend(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

std::string HttpAspectBackend::backend_id() const { return "classifier:" + endpoint_.url; }

AspectReport HttpAspectBackend::analyze(std::string_view caption, const FigureRecord &figure,
                                        std::span<const Paragraph> paragraphs) const {
    nlohmann::json body;
    body["caption"] = caption;
    body["figure_text"] = figure.figure_text;
    auto paras = nlohmann::json::array();
    for(const auto &p : paragraphs) {
        paras.push_back(p.text);
    }
    body["paragraphs"] = std::move(paras);

    const auto res = post_json(endpoint_, body);
    AspectReport r;
    const auto id = backend_id();
    for(auto a : all_aspects) {
        auto key = std::string(to_string(a));
        auto it = res.find(key);
        if(it == res.end() || !it->is_boolean()) {
            throw Error(ErrorCode::analysis_error, "classifier response lacks boolean '" + key + "'",
                        res.dump());
        }
        r[a] = AspectEntry{it->get<bool>() ? Satisfied::yes : Satisfied::no, {}, id};
    }
    return r;
}

// ---------------------------------------------------------------------------

AspectReport analyze(std::string_view caption, const FigureRecord &figure,
                     std::span<const Paragraph> paragraphs, const AspectBackend &backend) {
    try {
        return backend.analyze(caption, figure, paragraphs);
    } catch(const std::exception &e) {
        throw Error(ErrorCode::analysis_error, "aspect analysis failed",
                    backend.backend_id() + ": " + e.what());
    }
}

std::size_t content_aspects_satisfied(const AspectReport &report) {
    return static_cast<std::size_t>(std::count_if(content_aspects.begin(), content_aspects.end(),
                                                  [&](Aspect a) { return report.is_yes(a); }));
}

} // namespace capassist
