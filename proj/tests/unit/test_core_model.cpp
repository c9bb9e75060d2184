// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/bundle.hpp>
#include <capassist/digest.hpp>
#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/json_io.hpp>
#include <capassist/model.hpp>

#include <doctest.h>
#include <json.hpp>

#include <test_support.hpp>

using namespace capassist;
using nlohmann::json;

namespace {

std::string bundle(json figures, json paragraphs = json::array()) {
    return json{{"doc_id", "d"}, {"title", "T"}, {"abstract", "A"}, {"paragraphs", paragraphs}, {"figures", figures}}
        .dump();
}

} // namespace

TEST_CASE("table figures are dropped at parse") {
    auto input = bundle(json::array({{{"id", "3"}, {"kind", "chart"}, {"page", 1}, {"caption", "c"}},
                                     {{"id", "T1"}, {"kind", "table"}, {"page", 1}, {"caption", "t"}}}));
    auto parsed = parse_bundle_with_summary(input);
    REQUIRE(parsed.document.figures.size() == 1);
    CHECK(parsed.document.figures[0].id == "3");
    CHECK(parsed.summary.tables_dropped == 1);
    CHECK(parsed.summary.figures_kept == 1);
}

TEST_CASE("zero figures and three paragraphs") {
    auto doc = parse_bundle(bundle(json::array(), json::array({"a", "b", "c"})));
    CHECK(doc.figures.empty());
    REQUIRE(doc.paragraphs.size() == 3);
    for(std::size_t i = 0; i < 3; ++i) {
        CHECK(doc.paragraphs[i].index == i);
    }
}

TEST_CASE("duplicate figure id is a validation error naming the id") {
    auto input = bundle(json::array({{{"id", "2"}, {"kind", "chart"}, {"page", 1}, {"caption", ""}},
                                     {{"id", "2"}, {"kind", "other"}, {"page", 2}, {"caption", ""}}}));
    try {
        parse_bundle(input);
        FAIL("expected ValidationError");
    } catch(const ValidationError &e) {
        CHECK(std::string(e.what()).find('2') != std::string::npos);
        CHECK(e.path() == "/figures/1/id");
    }
}

TEST_CASE("ids are canonical after parse, so 02 collides with 2") {
    auto input = bundle(json::array({{{"id", "2"}, {"kind", "chart"}, {"page", 1}, {"caption", ""}},
                                     {{"id", "02"}, {"kind", "chart"}, {"page", 1}, {"caption", ""}}}));
    CHECK_THROWS_AS(parse_bundle(input), ValidationError);
    auto ok = parse_bundle(bundle(json::array({{{"id", "a01"}, {"kind", "chart"}, {"page", 1}, {"caption", ""}}})));
    CHECK(ok.figures[0].id == "A1");
}

TEST_CASE("malformed JSON reports a byte offset") {
    try {
        parse_bundle(R"({"doc_id": "d", "title": )");
        FAIL("expected ParseError");
    } catch(const ParseError &e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(e.byte_offset() > 0);
        CHECK(e.byte_offset() <= 25);
    }
}

TEST_CASE("missing required fields name the path") {
    SUBCASE("top level") {
        try {
            parse_bundle(R"({"title": "t", "abstract": "", "paragraphs": [], "figures": []})");
            FAIL("expected ValidationError");
        } catch(const ValidationError &e) {
            CHECK(e.path() == "/doc_id");
        }
    }
    SUBCASE("figure field") {
        try {
            parse_bundle(bundle(json::array({{{"id", "1"}, {"kind", "chart"}, {"caption", ""}}})));
            FAIL("expected ValidationError");
        } catch(const ValidationError &e) {
            CHECK(e.path() == "/figures/0/page");
        }
    }
    SUBCASE("wrong type") {
        try {
            parse_bundle(bundle(json::array(), json::array({"ok", 7})));
            FAIL("expected ValidationError");
        } catch(const ValidationError &e) {
            CHECK(e.path() == "/paragraphs/1");
        }
    }
    SUBCASE("page must be positive") {
        CHECK_THROWS_AS(parse_bundle(bundle(json::array({{{"id", "1"}, {"kind", "chart"}, {"page", 0}, {"caption", ""}}}))),
                        ValidationError);
    }
    SUBCASE("unknown kind") {
        CHECK_THROWS_AS(parse_bundle(bundle(json::array({{{"id", "1"}, {"kind", "photo"}, {"page", 1}, {"caption", ""}}}))),
                        ValidationError);
    }
}

TEST_CASE("optional fields default and unknown keys are ignored") {
    auto j = json::parse(bundle(json::array({{{"id", "1"}, {"kind", "chart"}, {"page", 2}, {"caption", "c"}, {"extra", 1}}})));
    j["generator"] = "pdffigures";
    auto doc = parse_bundle(j.dump());
    const auto &f = doc.figures.at(0);
    CHECK(f.figure_text.empty());
    CHECK_FALSE(f.region.has_value());
    CHECK_FALSE(f.image_ref.has_value());
    CHECK(f.page == 2);
}

TEST_CASE("source digest defaults to the SHA-256 of the input bytes") {
    auto input = bundle(json::array());
    auto doc = parse_bundle(input);
    CHECK(doc.source_digest == sha256_hex(input));
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("round trip on a one-figure document") {
    auto input = bundle(json::array({{{"id", "3"},
                                      {"kind", "chart"},
                                      {"page", 4},
                                      {"caption", "Accuracy rises."},
                                      {"region", {{"x1", 1.5}, {"y1", 2}, {"x2", 3}, {"y2", 4.25}}},
                                      {"figure_text", {"Accuracy", "epoch"}},
                                      {"image_ref", "f3.png"}}}),
                        json::array({"Figure 3 shows it."}));
    auto doc = parse_bundle(input);
    auto again = parse_bundle(serialize_bundle(doc));
    CHECK(again == doc);
}

TEST_CASE("empty document round trips") {
    Document doc;
    doc.source_digest = sha256_hex("");
    auto text = serialize_bundle(doc);
    CHECK_NOTHROW(json::parse(text));
    CHECK(parse_bundle(text) == doc);
}

TEST_CASE("unicode caption survives the round trip") {
    Document doc;
    doc.doc_id = "u";
    doc.source_digest = sha256_hex("u");
    FigureRecord f;
    f.id = "1";
    f.caption = "naïve Bayes";
    doc.figures.push_back(f);
    auto again = parse_bundle(serialize_bundle(doc));
    CHECK(again.figures.at(0).caption == "naïve Bayes");
    CHECK(again == doc);
}

TEST_CASE("normalize_figure_id") {
    CHECK(normalize_figure_id("3") == "3");
    CHECK(normalize_figure_id("03") == "3");
    CHECK(normalize_figure_id("a1") == "A1");
    CHECK(normalize_figure_id("S012") == "S12");
    CHECK(normalize_figure_id("000") == "0");
    CHECK_THROWS_AS(normalize_figure_id("IV"), Error);
    CHECK_THROWS_AS(normalize_figure_id(""), Error);
    CHECK_THROWS_AS(normalize_figure_id("ab1"), Error);
    CHECK_THROWS_AS(normalize_figure_id("3a"), Error);
    CHECK(is_canonical_figure_id("A1"));
    CHECK_FALSE(is_canonical_figure_id("a1"));
    CHECK_FALSE(is_canonical_figure_id("01"));
}

TEST_CASE("aspect order and names") {
    const char *names[] = {"helpfulness", "ocr", "relation", "stats", "takeaway", "visual"};
    for(std::size_t i = 0; i < all_aspects.size(); ++i) {
        CHECK(to_string(all_aspects[i]) == names[i]);
        CHECK(aspect_from_string(names[i]) == all_aspects[i]);
    }
    CHECK_FALSE(aspect_from_string("ocr ").has_value());
}

TEST_CASE("session JSON round trip") {
    CaptionSession s;
    s.doc_id = "d";
    s.figure_id = "1";
    s.drafts.push_back({"first", 10});
    Evaluation e;
    e.caption = "c";
    e.report[Aspect::stats] = AspectEntry{Satisfied::yes, {{0, 3}}, "rules"};
    e.report[Aspect::ocr].satisfied = Satisfied::unknown;
    e.rating = CaptionRating{4, "fine", "heuristic", std::nullopt};
    e.timestamp_ms = 11;
    s.evaluations.push_back(e);
    json j = s;
    CHECK(j["evaluations"][0]["report"]["ocr"]["satisfied"] == "unknown");
    CHECK(j["evaluations"][0]["report"]["stats"]["evidence"] == json::array({json::array({0, 3})}));
    CHECK(j.get<CaptionSession>() == s);
}
