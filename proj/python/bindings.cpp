// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/bundle.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/generation.hpp>
#include <capassist/json_io.hpp>
#include <capassist/mentions.hpp>
#include <capassist/rating.hpp>
#include <capassist/stats.hpp>
#include <capassist/study.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace capassist;
using nlohmann::json;

namespace {

// JSON crosses the boundary as text; the Python package decodes it.
std::string dump(const json &j) { return j.dump(); }

const FigureRecord &figure_or_throw(const Document &doc, const std::string &figure_id) {
    const auto *fig = doc.find_figure(normalize_figure_id(figure_id));
    if(fig == nullptr) {
        throw Error(ErrorCode::not_found, "no such figure", figure_id);
    }
    return *fig;
}

struct Linked {
    Document doc;
    MentionIndex index;
};

Linked linked(const std::string &bundle) {
    Linked l{parse_bundle(bundle), {}};
    l.index = link_paragraphs(l.doc);
    return l;
}

std::string analyze_caption(const std::string &bundle, const std::string &figure_id,
                            const std::optional<std::string> &caption) {
    auto l = linked(bundle);
    const auto &fig = figure_or_throw(l.doc, figure_id);
    const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
    static const RuleAspectBackend rules;
    return dump(json(rules.analyze(caption.value_or(fig.caption), fig, paras)));
}

std::string rate_caption(const std::string &bundle, const std::string &figure_id,
                         const std::optional<std::string> &caption) {
    auto l = linked(bundle);
    const auto &fig = figure_or_throw(l.doc, figure_id);
    const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
    static const RuleAspectBackend rules;
    HeuristicRatingBackend heuristic;
    const auto text = caption.value_or(fig.caption);
    const auto report = rules.analyze(text, fig, paras);
    return dump(json(rate(make_rating_context(paras, text), heuristic, &report)));
}

std::string generate_captions(const std::string &bundle, const std::string &figure_id, int num_beams,
                              std::optional<std::size_t> max_words) {
    auto l = linked(bundle);
    const auto &fig = figure_or_throw(l.doc, figure_id);
    const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
    static const RuleAspectBackend rules;
    static const ExtractiveBackend extractive;
    HeuristicRatingBackend heuristic;
    CaptionRater rater(rules, heuristic);
    DecodeParams params{num_beams, max_words};
    return dump(json(generate_pair_with_ratings(fig, paras, {extractive, extractive}, rater, params)));
}

std::string mention_index(const std::string &bundle) {
    return dump(json(linked(bundle).index));
}

std::string tlx_summary(const std::string &csv, const std::vector<std::pair<std::string, std::string>> &pairs,
                        double level) {
    std::vector<TlxPairing> pairings;
    for(const auto &[a, b] : pairs) {
        pairings.push_back({a, b});
    }
    return dump(tlx_report(parse_tlx_csv(csv), pairings, level));
}

std::string rank1_summary(const std::string &csv) {
    return dump(rank1_report(rank1_frequency(parse_ranking_csv(csv))));
}

} // namespace

PYBIND11_MODULE(_capassist, m) {
    m.doc() = "Native core of the capassist figure-caption assistant";

    static py::exception<Error> error_type(m, "Error", PyExc_RuntimeError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if(p) {
                std::rethrow_exception(p);
            }
        } catch(const Error &e) {
            py::object exc = py::reinterpret_borrow<py::object>(error_type)(e.what());
            exc.attr("code") = std::string(to_string(e.code()));
            exc.attr("detail") = e.detail();
            PyErr_SetObject(error_type.ptr(), exc.ptr());
        }
    });

    m.def("normalize_figure_id", &normalize_figure_id, py::arg("token"));
    m.def("find_mentions", &find_mentions, py::arg("text"), py::arg("known_ids"));
    m.def(
        "roundtrip_bundle", [](const std::string &bytes) { return serialize_bundle(parse_bundle(bytes)); },
        py::arg("bundle"));
    m.def("mention_index", &mention_index, py::arg("bundle"));
    m.def("analyze", &analyze_caption, py::arg("bundle"), py::arg("figure_id"), py::arg("caption") = py::none());
    m.def("rate", &rate_caption, py::arg("bundle"), py::arg("figure_id"), py::arg("caption") = py::none());
    m.def("generate", &generate_captions, py::arg("bundle"), py::arg("figure_id"), py::arg("num_beams") = 5,
          py::arg("max_words") = py::none());
    m.def(
        "build_prompt",
        [](std::string paragraph, std::string caption) { return build_prompt({std::move(paragraph), std::move(caption)}); },
        py::arg("paragraph"), py::arg("caption"));
    m.def(
        "parse_rating_response",
        [](const std::string &raw) {
            auto r = parse_rating_response(raw);
            return py::make_tuple(r.score, r.explanation);
        },
        py::arg("raw"));

    m.def(
        "paired_t_test",
        [](const std::vector<double> &a, const std::vector<double> &b) {
            auto r = stats::paired_t_test(a, b);
            return py::make_tuple(r.t, r.df, r.p_two_tailed);
        },
        py::arg("a"), py::arg("b"));
    m.def(
        "t_confidence_interval",
        [](double mean, double sd, int n, double level) {
            auto ci = stats::t_confidence_interval(mean, sd, n, level);
            return py::make_tuple(ci.lo, ci.hi);
        },
        py::arg("mean"), py::arg("sd"), py::arg("n"), py::arg("level") = 0.95);
    m.def("student_t_quantile", &stats::student_t_quantile, py::arg("p"), py::arg("df"));
    m.def("tlx_report", &tlx_summary, py::arg("csv"), py::arg("pairs") = std::vector<std::pair<std::string, std::string>>{},
          py::arg("level") = 0.95);
    m.def("rank1_report", &rank1_summary, py::arg("csv"));
}
