// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/errors.hpp>
#include <capassist/rating.hpp>

#include <doctest.h>
#include <httplib.h>
#include <json.hpp>

#include <test_support.hpp>

#include <atomic>
#include <thread>
#include <vector>

using namespace capassist;

namespace {

AspectReport report_with(std::initializer_list<Aspect> yes_aspects) {
    AspectReport r;
    for(auto a : content_aspects) {
        r[a].satisfied = Satisfied::no;
    }
    for(auto a : yes_aspects) {
        r[a].satisfied = Satisfied::yes;
    }
    return r;
}

// Replays canned responses in order; the last one repeats.
class ScriptedBackend final : public RatingBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies) : replies_(std::move(replies)) {}

    std::string respond(const RatingRequest &request) override {
        prompts.push_back(request.prompt);
        const auto i = std::min(calls++, replies_.size() - 1);
        if(replies_[i] == "!throw") {
            throw Error(ErrorCode::transport_error, "connection refused");
        }
        return replies_[i];
    }
    std::string backend_id() const override { return "scripted"; }

    std::size_t calls = 0;
    std::vector<std::string> prompts;

private:
    std::vector<std::string> replies_;
};

class ChatStub {
public:
    explicit ChatStub(std::string reply) : reply_(std::move(reply)) {
        server_.Post("/v1/chat/completions", [this](const httplib::Request &req, httplib::Response &res) {
            ++hits;
            last_body = nlohmann::json::parse(req.body);
            last_auth = req.get_header_value("Authorization");
            nlohmann::json out{{"choices", {{{"message", {{"role", "assistant"}, {"content", reply_}}}}}}};
            res.set_content(out.dump(), "application/json");
        });
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~ChatStub() {
        server_.stop();
        thread_.join();
    }
    std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }

    std::atomic<int> hits{0};
    nlohmann::json last_body;
    std::string last_auth;

private:
    std::string reply_;
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

} // namespace

TEST_CASE("prompt matches the golden file byte for byte") {
    RatingContext ctx{"Figure 1 shows that accuracy rises with model size.", "Accuracy of three models."};
    CHECK(build_prompt(ctx) == testing::read_file(testing::golden("prompt_basic.txt")));
}

TEST_CASE("prompt substitution rules") {
    const auto p = build_prompt({"P", "C"});
    CHECK(p.find("Paragraph: \"P\"") != std::string::npos);
    CHECK(p.find("Caption: \"C\"") != std::string::npos);
    CHECK(p.find("Please also explain your rating.") != std::string::npos);
    CHECK(p.find("6 is the highest; 1 is the lowest.") != std::string::npos);

    CHECK(build_prompt({"", "C"}).find("Paragraph: \"\"\n") != std::string::npos);
    CHECK(build_prompt({"P", "The \"best\" model"}).find("Caption: \"The \"best\" model\"") != std::string::npos);
    // Placeholder text inside the values is not substituted again.
    CHECK(build_prompt({"[caption]", "C"}).find("Paragraph: \"[caption]\"") != std::string::npos);
}

TEST_CASE("prompt asset file on disk equals the built-in template") {
    auto loaded = PromptTemplate::load_file(std::string(CAPASSIST_ASSETS) + "/rating_prompt.txt");
    CHECK(loaded.text() == PromptTemplate::builtin().text());
    CHECK_THROWS_AS(PromptTemplate::from_text("no placeholders"), ValidationError);
    CHECK_THROWS_AS(PromptTemplate::from_text("[paragraph] [caption] [caption]"), ValidationError);
}

TEST_CASE("parse_rating_response") {
    auto a = parse_rating_response("Rating: 4. The caption explains the axes.");
    CHECK(a.score == 4);
    CHECK(a.explanation == "The caption explains the axes.");

    const std::string s = "I would rate this caption 6 because it states the takeaway.";
    auto b = parse_rating_response(s);
    CHECK(b.score == 6);
    CHECK(b.explanation == s);

    CHECK_THROWS_AS(parse_rating_response("The caption is fine."), Error);
    try {
        parse_rating_response("The caption is fine.");
    } catch(const Error &e) {
        CHECK(e.code() == ErrorCode::parse_error);
        CHECK(e.detail() == "The caption is fine.");
    }
    CHECK(parse_rating_response("Out of 10 papers, I rate it 3.").score == 3);
    CHECK(parse_rating_response("It deserves a 5 overall.").score == 5);
    CHECK_THROWS_AS(parse_rating_response("Scores: 7, 8, 9."), Error);
    CHECK_THROWS_AS(parse_rating_response(""), Error);
}

TEST_CASE("heuristic score examples") {
    CHECK(heuristic_score(report_with({})) == 1);
    CHECK(heuristic_score(report_with({Aspect::stats, Aspect::visual})) == 3);
    CHECK(heuristic_score(report_with({Aspect::ocr, Aspect::relation, Aspect::stats, Aspect::takeaway,
                                       Aspect::visual})) == 6);
    auto unk = report_with({Aspect::stats});
    unk[Aspect::ocr].satisfied = Satisfied::unknown;
    CHECK(heuristic_score(unk) == 2);
    // Helpfulness is not a content aspect.
    auto help = report_with({});
    help[Aspect::helpfulness].satisfied = Satisfied::yes;
    CHECK(heuristic_score(help) == 1);
}

TEST_CASE("heuristic explanation lists missing aspects in fixed order and is deterministic") {
    auto r = report_with({Aspect::relation});
    const auto e1 = heuristic_explanation(r);
    CHECK(e1 == heuristic_explanation(r));
    const auto ocr = e1.find("OCR");
    const auto stats = e1.find("stat");
    const auto visual = e1.find("visual");
    REQUIRE(ocr != std::string::npos);
    REQUIRE(stats != std::string::npos);
    REQUIRE(visual != std::string::npos);
    CHECK(ocr < stats);
    CHECK(stats < visual);
}

TEST_CASE("rate with the heuristic backend") {
    HeuristicRatingBackend h;
    for(auto [report, expected] : {std::pair{report_with({}), 1},
                                   std::pair{report_with({Aspect::stats, Aspect::visual}), 3},
                                   std::pair{report_with({Aspect::ocr, Aspect::relation, Aspect::stats,
                                                          Aspect::takeaway, Aspect::visual}),
                                             6}}) {
        auto r = rate({"p", "caption"}, h, &report);
        CHECK(r.score == expected);
        CHECK_FALSE(r.explanation.empty());
        CHECK(r.backend_id == "heuristic");
        CHECK_FALSE(r.raw_response.has_value());
    }
}

TEST_CASE("rate mirrors heuristic_score over rule reports") {
    const RuleAspectBackend rules;
    HeuristicRatingBackend h;
    FigureRecord f;
    f.figure_text = {"accuracy"};
    for(const char *c : {"Results.", "Overall, accuracy is 20% higher than the baseline, shown in red."}) {
        auto report = rules.analyze(c, f, {});
        CHECK(rate({"", c}, h, &report).score == heuristic_score(report));
    }
}

TEST_CASE("empty caption is rejected before calling the backend") {
    ScriptedBackend b({"Rating: 3."});
    try {
        rate({"p", "   "}, b);
        FAIL("expected empty_caption");
    } catch(const Error &e) {
        CHECK(e.code() == ErrorCode::empty_caption);
    }
    CHECK(b.calls == 0);
}

TEST_CASE("one retry on an unparseable response") {
    SUBCASE("second reply parses") {
        ScriptedBackend b({"hmm", "Rating: 5. Clear."});
        auto r = rate({"p", "c"}, b);
        CHECK(r.score == 5);
        CHECK(b.calls == 2);
    }
    SUBCASE("both replies fail") {
        ScriptedBackend b({"hmm", "still no"});
        try {
            rate({"p", "c"}, b);
            FAIL("expected rating_error");
        } catch(const Error &e) {
            CHECK(e.code() == ErrorCode::rating_error);
            CHECK(e.detail() == "still no");
        }
        CHECK(b.calls == 2);
    }
}

TEST_CASE("transport failure is a rating error and the fallback takes over") {
    ScriptedBackend down({"!throw"});
    CHECK_THROWS_AS(rate({"p", "c"}, down), Error);
    HeuristicRatingBackend h;
    auto report = report_with({Aspect::stats});
    auto r = rate_with_fallback({"p", "c"}, down, &h, &report);
    CHECK(r.backend_id == "heuristic");
    CHECK(r.score == 2);
}

TEST_CASE("rating context is capped at a sentence boundary") {
    std::string para;
    while(para.size() < 5000) {
        para += "This sentence has exactly seven words. ";
    }
    const std::vector<Paragraph> one{Paragraph{0, para, {}}};
    auto ctx = make_rating_context(one, "c");
    CHECK(ctx.paragraph.size() <= rating_paragraph_cap);
    CHECK(ctx.paragraph.back() == '.');
    CHECK(para.rfind(ctx.paragraph, 0) == 0);

    const std::vector<Paragraph> two{Paragraph{0, "First.", {}}, Paragraph{3, "Second.", {}}};
    auto joined = make_rating_context(two, "c");
    CHECK(joined.paragraph.find("First.") < joined.paragraph.find("Second."));
    CHECK(make_rating_context({}, "c").paragraph.empty());

    // Hard cut never splits a UTF-8 sequence.
    std::string accents(4100, 'a');
    for(std::size_t i = 1; i < accents.size(); i += 3) {
        accents.replace(i, 2, "\xC3\xA9");
    }
    auto cut = truncate_at_sentence(accents, 4000);
    CHECK(cut.size() <= 4000);
    CHECK((static_cast<unsigned char>(cut.back()) & 0xC0) != 0xC0);
}

TEST_CASE("hosted chat backend wire contract") {
    ChatStub stub("Rating: 4. The caption names the axes.");
    HostedChatConfig cfg;
    cfg.endpoint = stub.url();
    cfg.api_key = "sk-test";
    cfg.model = "test-model";
    cfg.timeout = std::chrono::milliseconds(5000);
    HostedChatBackend backend(cfg);

    RatingContext ctx{"Figure 1 shows that accuracy rises with model size.", "Accuracy of three models."};
    auto r = rate(ctx, backend);
    CHECK(r.score == 4);
    CHECK(r.explanation == "The caption names the axes.");
    CHECK(r.backend_id == "hosted:test-model");
    REQUIRE(r.raw_response.has_value());
    CHECK(*r.raw_response == "Rating: 4. The caption names the axes.");

    CHECK(stub.last_body["model"] == "test-model");
    REQUIRE(stub.last_body["messages"].size() == 1);
    CHECK(stub.last_body["messages"][0]["role"] == "user");
    CHECK(stub.last_body["messages"][0]["content"] == build_prompt(ctx));
    CHECK(stub.last_auth == "Bearer sk-test");

    // Memoized per prompt.
    rate(ctx, backend);
    CHECK(stub.hits == 1);
}

TEST_CASE("hosted chat backend unreachable falls back to heuristic") {
    HostedChatConfig cfg;
    cfg.endpoint = "http://127.0.0.1:9/v1/chat/completions";
    cfg.timeout = std::chrono::milliseconds(500);
    HostedChatBackend backend(cfg);
    HeuristicRatingBackend h;
    auto report = report_with({Aspect::relation, Aspect::takeaway});
    auto r = rate_with_fallback({"p", "c"}, backend, &h, &report);
    CHECK(r.score == 3);
    CHECK(r.backend_id == "heuristic");
}
