// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors
//
// One PASS/FAIL line per primary acceptance criterion. Exit status is the
// number of failed criteria.

#include <capassist/aspects.hpp>
#include <capassist/bundle.hpp>
#include <capassist/digest.hpp>
#include <capassist/errors.hpp>
#include <capassist/generation.hpp>
#include <capassist/mentions.hpp>
#include <capassist/rating.hpp>
#include <capassist/service.hpp>
#include <capassist/stats.hpp>
#include <capassist/store.hpp>
#include <capassist/text.hpp>

#include <json.hpp>

#include <test_support.hpp>

#ifdef CAPASSIST_HAVE_BOOST_MATH
#include <boost/math/distributions/students_t.hpp>
#endif

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <thread>

using namespace capassist;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if(!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

using Clock = std::chrono::steady_clock;

int run(const char *name, double budget_s, const std::function<Outcome()> &fn) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = fn();
    } catch(const std::exception &e) {
        out.pass = false;
        out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    if(out.pass && secs >= budget_s) {
        out.pass = false;
        out.detail = "over time budget";
    }
    std::printf("%s %-26s %8.3fs (budget %.0fs)%s%s\n", out.pass ? "PASS" : "FAIL", name, secs, budget_s,
                out.detail.empty() ? "" : "  ", out.detail.c_str());
    return out.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

Outcome prompt_exactness() {
    Outcome o;
    RatingContext ctx{"Figure 1 shows that accuracy rises with model size.", "Accuracy of three models."};
    const auto golden = testing::read_file(testing::golden("prompt_basic.txt"));
    o.require(build_prompt(ctx) == golden, "prompt differs from golden file");
    o.require(golden.find("rate the level of usefulness") != std::string::npos, "golden lacks template text");
    o.require(golden.find("6 is the highest; 1 is the lowest.") != std::string::npos, "golden lacks scale text");
    return o;
}

Outcome aspect_rules() {
    Outcome o;
    const RuleAspectBackend rules;
    auto yes = [](const AspectEntry &e) { return e.satisfied == Satisfied::yes; };
    o.require(yes(rules.check_relation("A is lower than B")), "relation: lower than");
    o.require(yes(rules.check_relation("A is the lowest in the figure")), "relation: lowest in");
    o.require(yes(rules.check_relation("A is the highest in the figure")), "relation: highest in");
    o.require(yes(rules.check_stats("20% of the participants preferred it")), "stats: 20%");
    o.require(yes(rules.check_stats("The value of the ratio is 0.33")), "stats: 0.33");
    for(const char *c : {"The red line is ours", "Each circle is one run", "Arrows point to the left",
                         "Marker size encodes count", "The inset in the top corner zooms in",
                         "Faded bars have low opacity"}) {
        o.require(yes(rules.check_visual(c)), std::string("visual: ") + c);
    }
    FigureRecord fig;
    fig.figure_text = {"encoder", "decoder"};
    const auto none = rules.analyze("Overview of the system architecture", fig, {});
    for(auto a : all_aspects) {
        o.require(none[a].satisfied == Satisfied::no, std::string("no-cue caption: ") + std::string(to_string(a)));
    }

    // Corpus pass: every example caption, repeated, with evidence bounds checked.
    const std::vector<std::string> corpus{
        "A is lower than B (0.33 vs 0.5), shown by the red bars",
        "Accuracy vs. epochs for ResNet",
        "Our method works well",
        "Figure 3: Overview of results",
        "The figure shows that pruning improves accuracy",
        "Overall, our method outperforms the baseline",
        "Bars are ordered left to right by size",
        "Results of experiment 1",
        "Results.",
        "",
    };
    fig.figure_text = {"epochs", "accuracy", "resnet"};
    for(int rep = 0; rep < 200; ++rep) {
        for(const auto &c : corpus) {
            const auto r = rules.analyze(c, fig, {});
            for(auto a : all_aspects) {
                for(const auto &s : r[a].evidence) {
                    o.require(s.begin < s.end && s.end <= c.size(), "evidence out of bounds");
                }
            }
        }
    }
    return o;
}

Outcome mention_linker() {
    Outcome o;
    auto doc = parse_bundle(testing::read_fixture("mentions20.json"));
    const auto labels = nlohmann::json::parse(testing::read_fixture("mentions20_labels.json"));
    link_paragraphs(doc);
    std::size_t exact = 0;
    for(const auto &p : doc.paragraphs) {
        if(p.mentions == labels.at(std::to_string(p.index)).get<std::set<std::string>>()) {
            ++exact;
        } else {
            o.require(false, "paragraph " + std::to_string(p.index) + " mismatched");
        }
    }
    o.require(doc.paragraphs.size() == 20, "fixture must have 20 paragraphs");
    if(o.pass) {
        o.detail = std::to_string(exact) + "/20 exact";
    }
    return o;
}

Outcome submission_limit() {
    Outcome o;
    const auto bundle = testing::read_fixture("sample_bundle.json");
    {
        auto store = std::make_shared<MemoryStore>();
        Service svc(store, ServiceBackends::offline());
        svc.create_document(bundle, UploadFormat::bundle);
        svc.evaluate_caption("sample-2fig", "1", "First.");
        svc.evaluate_caption("sample-2fig", "1", "Second.");
        const auto before = store->get_session("sample-2fig", "1");
        bool limited = false;
        try {
            svc.evaluate_caption("sample-2fig", "1", "Third.");
        } catch(const Error &e) {
            limited = e.code() == ErrorCode::submission_limit_reached;
        }
        o.require(limited, "third evaluation did not hit the limit");
        o.require(store->get_session("sample-2fig", "1") == before, "state changed on the rejected call");
    }
    for(int round = 0; round < 5; ++round) {
        auto store = std::make_shared<MemoryStore>();
        Service svc(store, ServiceBackends::offline());
        svc.create_document(bundle, UploadFormat::bundle);
        std::vector<std::thread> threads;
        for(int i = 0; i < 16; ++i) {
            threads.emplace_back([&svc, i] {
                try {
                    svc.evaluate_caption("sample-2fig", "1", "Concurrent " + std::to_string(i));
                } catch(const Error &) {
                }
            });
        }
        for(auto &t : threads) {
            t.join();
        }
        const int n = store->get_session("sample-2fig", "1")->evaluation_count();
        o.require(n == 2, "concurrent round recorded " + std::to_string(n) + " evaluations");
    }
    return o;
}

bool faithful(const std::string &caption, const std::vector<Paragraph> &sources) {
    const auto &abbr = GenerationConfig::builtin().abbreviations;
    for(const auto &s : split_sentences(caption, abbr)) {
        bool found = false;
        for(const auto &p : sources) {
            for(const auto &src : split_sentences(p.text, abbr)) {
                found = found || src.find(s) != std::string::npos ||
                        (s.size() <= src.size() &&
                         text::iequals(std::string_view(src).substr(src.size() - s.size()), s));
            }
        }
        if(!found) {
            return false;
        }
    }
    return true;
}

Outcome generation_contract() {
    Outcome o;
    std::mt19937 rng(20240611);
    const std::vector<std::string> words{"accuracy", "depth", "training", "model",   "error",  "users",
                                         "rises",    "falls", "sharply",  "overall", "higher", "than",
                                         "the",      "red",   "curve",    "baseline", "with",  "per"};
    const std::vector<std::string> openers{"Figure 2 shows that ", "As shown in Figure 2, ", "In Figure 2, we see that ",
                                           "The ", "Figure 2 illustrates "};
    ExtractiveBackend backend;
    FigureRecord fig;
    fig.id = "2";
    int checked = 0;
    for(int trial = 0; trial < 300; ++trial) {
        std::vector<Paragraph> paras;
        const int np = 1 + static_cast<int>(rng() % 4);
        std::size_t total = 0;
        for(int p = 0; p < np; ++p) {
            std::string text;
            const int ns = 1 + static_cast<int>(rng() % 4);
            for(int s = 0; s < ns; ++s) {
                std::string sentence = openers[rng() % openers.size()];
                const int nw = 3 + static_cast<int>(rng() % 14);
                for(int w = 0; w < nw; ++w) {
                    sentence += (w ? " " : "") + words[rng() % words.size()];
                }
                sentence += ".";
                sentence[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(sentence[0])));
                text += (s ? " " : "") + sentence;
            }
            total += text::word_count(text);
            paras.push_back(Paragraph{static_cast<std::size_t>(p), text, {"2"}});
        }
        const auto longc = generate(fig, paras, Variant::long_caption, backend).text;
        const auto shortc = generate(fig, paras, Variant::short_caption, backend).text;
        o.require(text::word_count(shortc) <= 30, "short variant over 30 words");
        if(total >= 30) {
            ++checked;
            o.require(text::word_count(longc) >= 30, "long variant under 30 words with enough material");
        }
        o.require(faithful(longc, paras), "long variant not extractive: " + longc);
        o.require(faithful(shortc, paras), "short variant not extractive: " + shortc);
    }
    o.require(checked >= 50, "too few cases with 30+ words of material");
    if(o.pass) {
        o.detail = std::to_string(checked) + " cases with >= 30 words";
    }
    return o;
}

Outcome heuristic_rating() {
    Outcome o;
    HeuristicRatingBackend heuristic;
    std::array<int, 32> scores{};
    for(unsigned mask = 0; mask < 32; ++mask) {
        AspectReport r;
        int count = 0;
        for(std::size_t i = 0; i < content_aspects.size(); ++i) {
            const bool on = (mask >> i) & 1u;
            r[content_aspects[i]].satisfied = on ? Satisfied::yes : Satisfied::no;
            count += on;
        }
        const auto rating = rate({"", "caption"}, heuristic, &r);
        scores[mask] = rating.score;
        o.require(rating.score == 1 + count, "score != 1 + count for mask " + std::to_string(mask));
        o.require(heuristic_score(r) == rating.score, "heuristic_score disagrees with rate()");
        o.require(!rating.explanation.empty(), "empty explanation");
    }
    for(unsigned mask = 0; mask < 32; ++mask) {
        for(unsigned bit = 0; bit < 5; ++bit) {
            if(!((mask >> bit) & 1u)) {
                o.require(scores[mask | (1u << bit)] >= scores[mask], "monotonicity violated");
            }
        }
    }
    return o;
}

Outcome statistics() {
    Outcome o;
    const auto ci = stats::t_confidence_interval(2.39, 0.614, 15, 0.95);
    o.require(std::fabs(ci.lo - 2.05) <= 0.01 && std::fabs(ci.hi - 2.73) <= 0.01, "CI off from [2.05, 2.73]");
    o.require(std::fabs(stats::student_t_quantile(0.975, 14) - 2.1448) <= 1e-4, "t quantile off");
    o.require(std::fabs(stats::student_t_two_tailed(3.0, 3) - 0.05766888562243731) <= 1e-6, "p(t=3, df=3) off");

    struct Case {
        std::vector<double> a, b;
        double p;
    };
    // Reference p-values from scipy.stats.ttest_rel.
    const std::vector<Case> cases{
        {{5, 4, 3, 5, 4, 3, 2, 4}, {3, 3, 2, 4, 2, 3, 1, 2}, 0.001565277953172824},
        {{2.1, 3.4, 1.9, 2.8, 3.3, 2.5}, {2.0, 3.9, 2.4, 3.1, 3.0, 3.2}, 0.1532347910161846},
        {{10, 12, 9, 11, 13, 10, 12, 11, 10, 14}, {9, 11, 9, 10, 11, 10, 11, 10, 9, 12}, 0.0010538712570165528},
        {{1, 2, 3, 4}, {1.5, 2.2, 3.9, 4.1}, 0.09894459695402424},
        {{0.31, 0.45, 0.29, 0.52, 0.38, 0.41, 0.36}, {0.30, 0.40, 0.33, 0.47, 0.35, 0.40, 0.30}, 0.11245059342976264},
        {{3, 6, 9}, {0, 4, 3}, 0.09273529127344522},
    };
    double worst = 0;
    for(const auto &c : cases) {
        const auto r = stats::paired_t_test(c.a, c.b);
        worst = std::max(worst, std::fabs(r.p_two_tailed - c.p));
#ifdef CAPASSIST_HAVE_BOOST_MATH
        boost::math::students_t dist(r.df);
        const double ref = 2 * boost::math::cdf(boost::math::complement(dist, std::fabs(r.t)));
        worst = std::max(worst, std::fabs(r.p_two_tailed - ref));
#endif
    }
    o.require(worst <= 1e-6, "paired t-test p differs from the oracle");
    if(o.pass) {
        std::ostringstream ss;
        ss << "CI [" << ci.lo << ", " << ci.hi << "], max |dp| " << worst;
        o.detail = ss.str();
    }
    return o;
}

std::string random_text(std::mt19937 &rng, std::size_t max_len) {
    static const std::vector<std::string> pieces{"a", "Z", "7", " ", ".", ",", "\"", "\\", "/", "\n", "\t",
                                                 "é", "ï", "—", "∑", "中", "🙂", "{", "}", "[", "%", "'"};
    std::string s;
    const std::size_t n = rng() % (max_len + 1);
    for(std::size_t i = 0; i < n; ++i) {
        s += pieces[rng() % pieces.size()];
    }
    return s;
}

Document random_document(std::mt19937 &rng, int serial) {
    Document d;
    d.doc_id = "doc-" + std::to_string(serial) + random_text(rng, 4);
    d.title = random_text(rng, 20);
    d.abstract = random_text(rng, 60);
    const std::size_t np = rng() % 8;
    for(std::size_t i = 0; i < np; ++i) {
        d.paragraphs.push_back(Paragraph{i, random_text(rng, 80), {}});
    }
    std::set<std::string> ids;
    const std::size_t nf = rng() % 6;
    std::uniform_real_distribution<double> coord(0.0, 1000.0);
    while(ids.size() < nf) {
        std::string id = (rng() % 3 == 0) ? std::string(1, static_cast<char>('A' + rng() % 26)) : std::string();
        id += std::to_string(rng() % 40);
        if(!ids.insert(id).second) {
            continue;
        }
        FigureRecord f;
        f.id = id;
        f.kind = (rng() % 2) ? FigureKind::chart : FigureKind::other;
        f.caption = random_text(rng, 40);
        f.page = 1 + static_cast<int>(rng() % 30);
        if(rng() % 2) {
            f.region = Region{coord(rng), coord(rng), coord(rng), coord(rng)};
        }
        const std::size_t nt = rng() % 5;
        for(std::size_t t = 0; t < nt; ++t) {
            auto tok = random_text(rng, 6);
            f.figure_text.push_back(text::trim(tok).empty() ? "x" + tok : tok);
        }
        if(rng() % 2) {
            f.image_ref = "img/" + random_text(rng, 5) + ".png";
        }
        d.figures.push_back(std::move(f));
    }
    d.source_digest = sha256_hex(d.doc_id);
    return d;
}

Outcome round_trip() {
    Outcome o;
    std::mt19937 rng(7);
    for(int i = 0; i < 1000; ++i) {
        const auto doc = random_document(rng, i);
        const auto back = parse_bundle(serialize_bundle(doc, i % 2 ? 2 : -1));
        if(!(back == doc)) {
            o.require(false, "document " + std::to_string(i) + " did not round trip");
            break;
        }
    }
    if(o.pass) {
        o.detail = "1000 documents";
    }
    return o;
}

Outcome offline_end_to_end() {
    Outcome o;
    auto store = std::make_shared<MemoryStore>();
    Service svc(store, ServiceBackends::offline());
    const auto created = svc.create_document(testing::read_fixture("sample_bundle.json"), UploadFormat::bundle);
    o.require(created.figure_count == 2, "figure_count != 2");
    const auto detail = svc.get_figure_detail(created.doc_id, "1");
    o.require(detail.rating.has_value(), "detail lacks rating");
    o.require(detail.mention_paragraphs.size() == 2, "detail lacks mention paragraphs");
    o.require(detail.generated.long_caption.ok() && detail.generated.short_caption.ok(), "generation failed");
    const auto e1 = svc.evaluate_caption(created.doc_id, "1", "Agreement per aspect.");
    const auto e2 = svc.evaluate_caption(created.doc_id, "1",
                                         "Overall, the checker agrees on 82% of captions, and the red bars "
                                         "mark aspects where it is stricter than the annotators.");
    o.require(e1.session.evaluations_used == 1 && e2.session.evaluations_used == 2, "evaluation counters wrong");
    o.require(e2.rating.backend_id == "heuristic", "rating backend was not the offline one");
    o.require(e2.rating.score > e1.rating.score, "richer caption did not rate higher");
    if(o.pass) {
        o.detail = "scores " + std::to_string(e1.rating.score) + " -> " + std::to_string(e2.rating.score);
    }
    return o;
}

} // namespace

int main() {
    int failed = 0;
    failed += run("prompt-exactness", 1, prompt_exactness);
    failed += run("aspect-rules", 5, aspect_rules);
    failed += run("mention-linker", 5, mention_linker);
    failed += run("submission-limit", 10, submission_limit);
    failed += run("generation-length", 10, generation_contract);
    failed += run("heuristic-rating", 1, heuristic_rating);
    failed += run("statistics", 5, statistics);
    failed += run("round-trip", 30, round_trip);
    failed += run("offline-end-to-end", 10, offline_end_to_end);
    std::printf("%d of 9 criteria failed\n", failed);
    return failed;
}
