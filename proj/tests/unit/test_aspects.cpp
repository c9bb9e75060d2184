// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/errors.hpp>
#include <capassist/text.hpp>

#include <doctest.h>

#include <test_support.hpp>

#include <vector>

using namespace capassist;

namespace {

const RuleAspectBackend &rules() {
    static const RuleAspectBackend backend;
    return backend;
}

Satisfied ocr(std::string_view caption, std::vector<std::string> tokens) {
    return rules().check_ocr(caption, tokens).satisfied;
}

bool yes(const AspectEntry &e) { return e.satisfied == Satisfied::yes; }

FigureRecord figure_with(std::vector<std::string> tokens) {
    FigureRecord f;
    f.id = "1";
    f.figure_text = std::move(tokens);
    return f;
}

void check_evidence(std::string_view caption, const AspectReport &report) {
    for(auto a : all_aspects) {
        for(const auto &span : report[a].evidence) {
            CHECK(span.begin < span.end);
            CHECK(span.end <= caption.size());
        }
    }
}

} // namespace

TEST_CASE("ocr") {
    CHECK(ocr("Accuracy vs. epochs for ResNet", {"epochs", "accuracy", "resnet"}) == Satisfied::yes);
    CHECK(ocr("Our method works well", {"x", "y"}) == Satisfied::no);
    CHECK(ocr("Anything at all", {}) == Satisfied::unknown);
    CHECK(ocr("", {}) == Satisfied::unknown);
    // Tokens shorter than three characters never count.
    CHECK(ocr("A and B", {"a", "b"}) == Satisfied::no);
    CHECK(ocr("Loss (MSE), per epoch.", {"mse"}) == Satisfied::yes);

    const std::string caption = "Accuracy vs. epochs";
    auto e = rules().check_ocr(caption, std::vector<std::string>{"EPOCHS"});
    REQUIRE(e.evidence.size() == 1);
    CHECK(caption.substr(e.evidence[0].begin, e.evidence[0].end - e.evidence[0].begin) == "epochs");
}

TEST_CASE("monotone ocr") {
    const std::string caption = "Latency of the cache under load";
    std::vector<std::string> tokens{"latency"};
    REQUIRE(ocr(caption, tokens) == Satisfied::yes);
    for(const char *extra : {"x", "load", "zzz", "Cache", "ms"}) {
        tokens.emplace_back(extra);
        CHECK(ocr(caption, tokens) == Satisfied::yes);
    }
}

TEST_CASE("relation") {
    CHECK(yes(rules().check_relation("A is lower than B")));
    CHECK(yes(rules().check_relation("A is the highest in the figure")));
    CHECK(yes(rules().check_relation("A is the lowest in the figure")));
    CHECK_FALSE(yes(rules().check_relation("Overview of the system architecture")));
    CHECK(yes(rules().check_relation("Method X is more accurate than Y")));
    CHECK_FALSE(yes(rules().check_relation("The latest results")));
    CHECK_FALSE(yes(rules().check_relation("We use the test set in all runs")));
}

TEST_CASE("stats") {
    CHECK(yes(rules().check_stats("20% of the users agreed")));
    CHECK(yes(rules().check_stats("The value of x is 0.33")));
    CHECK_FALSE(yes(rules().check_stats("Figure 3: Overview of results")));
    CHECK_FALSE(yes(rules().check_stats("See Section 4.2 and [12] for details")));
    CHECK_FALSE(yes(rules().check_stats("As in Figs. 2 and 3")));
    CHECK(yes(rules().check_stats("Figure 3 reports 45% recall")));

    const std::string caption = "The value of x is 0.33";
    auto e = rules().check_stats(caption);
    REQUIRE_FALSE(e.evidence.empty());
    CHECK(caption.substr(e.evidence[0].begin, e.evidence[0].end - e.evidence[0].begin) == "0.33");
}

TEST_CASE("takeaway") {
    CHECK(yes(rules().check_takeaway("The figure shows that pruning improves accuracy")));
    CHECK_FALSE(yes(rules().check_takeaway("Accuracy curves.")));
    CHECK(yes(rules().check_takeaway("Overall, our method outperforms the baseline")));
}

TEST_CASE("visual") {
    CHECK(yes(rules().check_visual("The red dashed line denotes the baseline")));
    CHECK(yes(rules().check_visual("Bars are ordered left to right by size")));
    CHECK_FALSE(yes(rules().check_visual("Results of experiment 1")));
    // One word from each lexicon family.
    for(const char *c : {"Blue is ours", "Each circle is a run", "Arrows point upward", "Marker size encodes count",
                         "The inset at the top shows detail", "Faded points are outliers"}) {
        CHECK_MESSAGE(yes(rules().check_visual(c)), c);
    }
    // Word boundaries: "predicted" holds "red", "barely" holds "bar".
    CHECK_FALSE(yes(rules().check_visual("Predicted barely changes")));
}

TEST_CASE("no cues means no everywhere") {
    const std::string caption = "Overview of the system architecture";
    auto r = rules().analyze(caption, figure_with({"encoder"}), {});
    for(auto a : all_aspects) {
        CHECK_MESSAGE(r[a].satisfied == Satisfied::no, to_string(a));
    }
}

TEST_CASE("helpfulness composite") {
    AspectReport r;
    for(auto a : content_aspects) {
        r[a].satisfied = Satisfied::no;
    }
    r[Aspect::relation].satisfied = Satisfied::yes;
    r[Aspect::takeaway].satisfied = Satisfied::yes;
    const std::string twelve = "one two three four five six seven eight nine ten eleven twelve";
    REQUIRE(text::word_count(twelve) == 12);
    auto h = rules().check_helpfulness(twelve, r);
    CHECK(yes(h));
    CHECK(h.backend_id == RuleAspectBackend::helpfulness_id);

    AspectReport none;
    CHECK_FALSE(yes(rules().check_helpfulness("Results.", none)));

    AspectReport stats_only;
    stats_only[Aspect::stats].satisfied = Satisfied::yes;
    std::string forty;
    for(int i = 0; i < 40; ++i) {
        forty += "word ";
    }
    CHECK_FALSE(yes(rules().check_helpfulness(forty, stats_only)));

    // Seven words fall under the threshold even with every aspect satisfied.
    AspectReport all;
    for(auto a : content_aspects) {
        all[a].satisfied = Satisfied::yes;
    }
    CHECK_FALSE(yes(rules().check_helpfulness("one two three four five six seven", all)));
}

TEST_CASE("analyze composition example") {
    const std::string caption = "A is lower than B (0.33 vs 0.5), shown by the red bars";
    SUBCASE("figure text with one-letter tokens") {
        // Single letters are below the OCR token length, so ocr is no.
        auto r = analyze(caption, figure_with({"a", "b"}), {}, rules());
        CHECK(r[Aspect::ocr].satisfied == Satisfied::no);
        CHECK(yes(r[Aspect::relation]));
        CHECK(yes(r[Aspect::stats]));
        CHECK_FALSE(yes(r[Aspect::takeaway]));
        CHECK(yes(r[Aspect::visual]));
        CHECK(yes(r[Aspect::helpfulness]));
        check_evidence(caption, r);
    }
    SUBCASE("figure text sharing a word") {
        auto r = analyze(caption, figure_with({"bars"}), {}, rules());
        CHECK(yes(r[Aspect::ocr]));
        CHECK(yes(r[Aspect::relation]));
        CHECK(yes(r[Aspect::stats]));
        CHECK_FALSE(yes(r[Aspect::takeaway]));
        CHECK(yes(r[Aspect::visual]));
        CHECK(yes(r[Aspect::helpfulness]));
    }
}

TEST_CASE("empty caption") {
    auto r = analyze("", figure_with({"x"}), {}, rules());
    for(auto a : all_aspects) {
        CHECK(r[a].satisfied == Satisfied::no);
    }
}

TEST_CASE("determinism and case insensitivity") {
    const std::vector<std::string> captions{
        "A is lower than B (0.33 vs 0.5), shown by the red bars",
        "Overall, 20% of the users agreed that the blue curve is the highest in the figure",
        "Accuracy vs. epochs for ResNet",
        "Results of experiment 1",
    };
    auto fig = figure_with({"accuracy", "epochs"});
    for(const auto &c : captions) {
        auto r1 = rules().analyze(c, fig, {});
        auto r2 = rules().analyze(c, fig, {});
        CHECK(r1 == r2);
        auto upper = rules().analyze(text::ascii_upper(c), fig, {});
        for(auto a : all_aspects) {
            CHECK_MESSAGE(upper[a].satisfied == r1[a].satisfied, c, " / ", to_string(a));
        }
        check_evidence(c, r1);
    }
}

TEST_CASE("report carries backend ids") {
    auto r = rules().analyze("Overall, the red bar is taller than the blue bar", figure_with({}), {});
    CHECK(r[Aspect::ocr].satisfied == Satisfied::unknown);
    CHECK(r[Aspect::visual].backend_id == "rules");
    CHECK(r[Aspect::helpfulness].backend_id == "rules+composite");
    CHECK(content_aspects_satisfied(r) == 3);
}

TEST_CASE("lexicons load from the shipped file and reject empty lists") {
    auto lex = AspectLexicons::load_file(std::string(CAPASSIST_ASSETS) + "/lexicons.conf");
    CHECK(lex.version == AspectLexicons::builtin().version);
    CHECK(lex.visual_words == AspectLexicons::builtin().visual_words);
    CHECK_THROWS_AS(AspectLexicons::from_config(KvConfig::parse("version = x\n", "inline")), ValidationError);
}

TEST_CASE("failing external backend surfaces analysis_error with the backend id") {
    HttpEndpoint ep;
    ep.url = "http://127.0.0.1:9/classify";
    ep.timeout = std::chrono::milliseconds(500);
    HttpAspectBackend backend(ep);
    try {
        analyze("caption", figure_with({}), {}, backend);
        FAIL("expected analysis_error");
    } catch(const Error &e) {
        CHECK(e.code() == ErrorCode::analysis_error);
        CHECK(e.detail().find(backend.backend_id()) != std::string::npos);
    }
}
