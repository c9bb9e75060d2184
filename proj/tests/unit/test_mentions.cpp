// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/bundle.hpp>
#include <capassist/errors.hpp>
#include <capassist/mentions.hpp>

#include <algorithm>

#include <doctest.h>
#include <json.hpp>

#include <test_support.hpp>

using namespace capassist;
using Ids = std::set<std::string>;

namespace {

Document doc_with(std::vector<std::string> paragraphs, std::vector<std::string> ids) {
    Document d;
    d.doc_id = "m";
    for(std::size_t i = 0; i < paragraphs.size(); ++i) {
        d.paragraphs.push_back(Paragraph{i, paragraphs[i], {}});
    }
    for(auto &id : ids) {
        FigureRecord f;
        f.id = id;
        d.figures.push_back(f);
    }
    return d;
}

} // namespace

TEST_CASE("find_mentions examples") {
    CHECK(find_mentions("Figure 3 demonstrates the effect.", {"1", "2", "3"}) == Ids{"3"});
    CHECK(find_mentions("Figures 2 and 4 show trends", {"2", "3", "4"}) == Ids{"2", "4"});
    CHECK(find_mentions("see Figs. 1–3", {"1", "2", "3"}) == Ids{"1", "2", "3"});
    CHECK(find_mentions("configure 3 options", {"3"}).empty());
}

TEST_CASE("find_mentions forms") {
    const Ids known{"1", "2", "3", "4", "5", "6", "A1"};
    CHECK(find_mentions("Figs. 1, 2, and 5 agree", known) == Ids{"1", "2", "5"});
    CHECK(find_mentions("fig. 4", known) == Ids{"4"});
    CHECK(find_mentions("FIGURES 1 to 3", known) == Ids{"1", "2", "3"});
    CHECK(find_mentions("Figures 5-3", known) == Ids{"3", "5"});
    CHECK(find_mentions("Figures 6", known) == Ids{"6"});
    CHECK(find_mentions("Figure a1", known) == Ids{"A1"});
    CHECK(find_mentions("Figure 03 again", known) == Ids{"3"});
    CHECK(find_mentions("Figure 9 is unknown", known).empty());
    CHECK(find_mentions("transfigure 5", known).empty());
    CHECK(find_mentions("nothing here", {}).empty());
    CHECK(find_mentions("Figure 3", {}).empty());
}

TEST_CASE("range expansion equals the integer interval") {
    Ids known;
    for(int i = 1; i <= 12; ++i) {
        known.insert(std::to_string(i));
    }
    for(int a = 1; a <= 12; ++a) {
        for(int b = a; b <= 12; ++b) {
            Ids expected;
            for(int k = a; k <= b; ++k) {
                expected.insert(std::to_string(k));
            }
            const auto text = "Figures " + std::to_string(a) + "-" + std::to_string(b) + " show it.";
            CHECK_MESSAGE(find_mentions(text, known) == expected, text);
        }
    }
}

TEST_CASE("link_paragraphs composition example") {
    std::vector<std::string> paras(10, "Nothing here.");
    paras[4] = "Figure 1 shows the setup.";
    paras[9] = "In Figure 1 and Figure 2 the trend holds.";
    auto doc = doc_with(paras, {"1", "2"});
    auto index = link_paragraphs(doc);
    CHECK(index.paragraphs_for("1") == std::vector<std::size_t>{4, 9});
    CHECK(index.paragraphs_for("2") == std::vector<std::size_t>{9});
    CHECK(doc.paragraphs[9].mentions == Ids{"1", "2"});
    CHECK(doc.paragraphs[4].mentions == Ids{"1"});
    CHECK(doc.paragraphs[0].mentions.empty());
}

TEST_CASE("unmentioned figure and empty document") {
    auto doc = doc_with({"Figure 1 only."}, {"1", "5"});
    auto index = link_paragraphs(doc);
    REQUIRE(index.entries().count("5") == 1);
    CHECK(index.paragraphs_for("5").empty());

    auto empty = doc_with({}, {"1", "2"});
    auto idx2 = build_mention_index(empty);
    CHECK(idx2.entries().size() == 2);
    for(const auto &[id, ps] : idx2.entries()) {
        CHECK(ps.empty());
    }
}

TEST_CASE("mention_paragraphs returns document order") {
    auto doc = doc_with({"Fig. 2 first.", "none", "Figure 2 again."}, {"2"});
    auto index = link_paragraphs(doc);
    auto ps = mention_paragraphs(doc, index, "2");
    REQUIRE(ps.size() == 2);
    CHECK(ps[0].index == 0);
    CHECK(ps[1].index == 2);
}

TEST_CASE("monotonicity: adding a paragraph never removes entries") {
    auto doc = doc_with({"Figure 1 here.", "Figures 2-3 there."}, {"1", "2", "3"});
    auto before = build_mention_index(doc);
    doc.paragraphs.push_back(Paragraph{2, "Figure 3 and Figure 1.", {}});
    auto after = build_mention_index(doc);
    for(const auto &[id, ps] : before.entries()) {
        const auto &now = after.paragraphs_for(id);
        for(auto p : ps) {
            CHECK(std::find(now.begin(), now.end(), p) != now.end());
        }
    }
}

TEST_CASE("20-paragraph hand-labeled fixture matches exactly") {
    auto doc = parse_bundle(testing::read_fixture("mentions20.json"));
    const auto labels = nlohmann::json::parse(testing::read_fixture("mentions20_labels.json"));
    REQUIRE(doc.paragraphs.size() == 20);
    auto index = link_paragraphs(doc);
    for(const auto &p : doc.paragraphs) {
        const auto expected = labels.at(std::to_string(p.index)).get<Ids>();
        CHECK_MESSAGE(p.mentions == expected, "paragraph ", p.index, ": ", p.text);
    }
    // Soundness and strict ordering.
    std::set<std::string> known;
    for(const auto &f : doc.figures) {
        known.insert(f.id);
    }
    for(const auto &[id, ps] : index.entries()) {
        CHECK(known.count(id) == 1);
        for(std::size_t i = 0; i < ps.size(); ++i) {
            if(i > 0) {
                CHECK(ps[i - 1] < ps[i]);
            }
            CHECK(find_mentions(doc.paragraphs.at(ps[i]).text, known).count(id) == 1);
        }
    }
}
