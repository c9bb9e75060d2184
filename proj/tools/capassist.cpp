// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/aspects.hpp>
#include <capassist/bundle.hpp>
#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/generation.hpp>
#include <capassist/http_api.hpp>
#include <capassist/ingest.hpp>
#include <capassist/json_io.hpp>
#include <capassist/mentions.hpp>
#include <capassist/rating.hpp>
#include <capassist/service.hpp>
#include <capassist/study.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace capassist;
using nlohmann::json;

std::string read_input(const std::string &path) {
    if(path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if(!in) {
        throw Error(ErrorCode::not_found, "cannot open input", path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const json &j, const std::string &out_path) {
    const auto text = j.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
    if(out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if(!out || !(out << text)) {
        throw Error(ErrorCode::storage_error, "cannot write output", out_path);
    }
}

void emit_text(const std::string &text, const std::string &out_path) {
    if(out_path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if(!out || !(out << text << "\n")) {
        throw Error(ErrorCode::storage_error, "cannot write output", out_path);
    }
}

UploadFormat guess_format(const std::string &path, const std::string &flag) {
    if(!flag.empty()) {
        return *upload_format_from_string(flag);
    }
    return path.size() >= 5 && path.substr(path.size() - 5) == ".json" ? UploadFormat::bundle
                                                                       : UploadFormat::pdf;
}

struct Loaded {
    Document doc;
    MentionIndex index;
};

Loaded load_bundle(const std::string &path) {
    Loaded l;
    l.doc = parse_bundle(read_input(path));
    l.index = link_paragraphs(l.doc);
    return l;
}

const FigureRecord &figure_or_throw(const Document &doc, const std::string &id) {
    const auto *fig = doc.find_figure(normalize_figure_id(id));
    if(fig == nullptr) {
        throw Error(ErrorCode::not_found, "figure not found", id);
    }
    return *fig;
}

HttpApi *g_api = nullptr;

void on_signal(int) {
    if(g_api != nullptr) {
        g_api->stop();
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Figure caption writing assistant"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("--out", out_path, "Write output to this file instead of stdout");

    // ingest
    auto *ingest = app.add_subcommand("ingest", "Text layer or bundle -> bundle JSON");
    std::string ingest_input;
    std::string ingest_format;
    std::string ingest_doc_id;
    ingest->add_option("input", ingest_input, "Input file, or - for stdin")->required();
    ingest->add_option("--format", ingest_format, "pdf or bundle (default: by extension)")
        ->check(CLI::IsMember({"pdf", "bundle"}));
    ingest->add_option("--doc-id", ingest_doc_id, "Document id (default: digest prefix)");

    // link
    auto *link = app.add_subcommand("link", "Bundle -> mention index JSON");
    std::string link_input;
    link->add_option("bundle", link_input)->required();

    // analyze
    auto *analyze_cmd = app.add_subcommand("analyze", "Aspect report for a caption");
    std::string an_input;
    std::string an_figure;
    std::optional<std::string> an_caption;
    analyze_cmd->add_option("bundle", an_input)->required();
    analyze_cmd->add_option("--figure", an_figure)->required();
    analyze_cmd->add_option("--caption", an_caption, "Caption to check (default: the figure's)");

    // rate
    auto *rate_cmd = app.add_subcommand("rate", "Rate a caption from 1 to 6");
    std::string rt_input;
    std::string rt_figure;
    std::optional<std::string> rt_caption;
    std::string rt_backend = "heuristic";
    bool rt_prompt_only = false;
    rate_cmd->add_option("bundle", rt_input)->required();
    rate_cmd->add_option("--figure", rt_figure)->required();
    rate_cmd->add_option("--caption", rt_caption, "Caption to rate (default: the figure's)");
    rate_cmd->add_option("--backend", rt_backend, "heuristic or hosted")
        ->check(CLI::IsMember({"heuristic", "hosted"}));
    rate_cmd->add_flag("--print-prompt", rt_prompt_only, "Print the rendered prompt and exit");

    // gen
    auto *gen_cmd = app.add_subcommand("gen", "Long and short captions for a figure");
    std::string gen_input;
    std::string gen_figure;
    int gen_beams = 5;
    std::optional<std::size_t> gen_max_words;
    gen_cmd->add_option("bundle", gen_input)->required();
    gen_cmd->add_option("--figure", gen_figure)->required();
    gen_cmd->add_option("--beams", gen_beams)->check(CLI::PositiveNumber);
    gen_cmd->add_option("--max-words", gen_max_words)->check(CLI::PositiveNumber);

    // serve
    auto *serve_cmd = app.add_subcommand("serve", "Start the HTTP service");
    std::optional<std::string> sv_config;
    std::optional<std::string> sv_host;
    std::optional<int> sv_port;
    std::optional<std::string> sv_storage;
    std::optional<int> sv_limit;
    serve_cmd->add_option("--config", sv_config, "JSON settings file")->check(CLI::ExistingFile);
    serve_cmd->add_option("--host", sv_host);
    serve_cmd->add_option("--port", sv_port)->check(CLI::Range(0, 65535));
    serve_cmd->add_option("--storage", sv_storage, "Store directory (default: in memory)");
    serve_cmd->add_option("--evaluation-limit", sv_limit)->check(CLI::NonNegativeNumber);

    // eval-tlx
    auto *tlx_cmd = app.add_subcommand("eval-tlx", "Workload CSV -> means, intervals and paired tests");
    std::string tlx_input;
    std::vector<std::string> tlx_pairs;
    double tlx_level = 0.95;
    tlx_cmd->add_option("csv", tlx_input)->required();
    tlx_cmd->add_option("--pair", tlx_pairs, "baseline:treatment condition pair (repeatable)");
    tlx_cmd->add_option("--level", tlx_level)->check(CLI::Range(0.0, 1.0));

    // eval-rank
    auto *rank_cmd = app.add_subcommand("eval-rank", "Ranking CSV -> rank-1 counts per expert");
    std::string rank_input;
    rank_cmd->add_option("csv", rank_input)->required();

    try {
        app.parse(argc, argv);
    } catch(const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch(const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch(const CLI::ParseError &e) {
        app.exit(e);
        return 2;
    }

    try {
        if(*ingest) {
            const auto format = guess_format(ingest_input, ingest_format);
            const auto bytes = read_input(ingest_input);
            Document doc;
            std::vector<std::string> warnings;
            if(format == UploadFormat::pdf) {
                IngestMeta meta;
                meta.doc_id = ingest_doc_id;
                auto res = build_document(bytes, FixtureTextExtractor{}, meta);
                doc = std::move(res.document);
                warnings = std::move(res.warnings);
            } else {
                auto res = parse_bundle_with_summary(bytes);
                doc = std::move(res.document);
                if(!ingest_doc_id.empty()) {
                    doc.doc_id = ingest_doc_id;
                }
                if(res.summary.tables_dropped > 0) {
                    warnings.push_back(std::to_string(res.summary.tables_dropped) + " table caption(s) excluded");
                }
            }
            for(const auto &w : warnings) {
                std::cerr << json{{"warning", w}}.dump() << "\n";
            }
            emit_text(serialize_bundle(doc), out_path);
        } else if(*link) {
            const auto l = load_bundle(link_input);
            emit(json{{"doc_id", l.doc.doc_id}, {"mentions", l.index}}, out_path);
        } else if(*analyze_cmd) {
            const auto l = load_bundle(an_input);
            const auto &fig = figure_or_throw(l.doc, an_figure);
            const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
            RuleAspectBackend rules;
            const auto report = analyze(an_caption.value_or(fig.caption), fig, paras, rules);
            emit(json(report), out_path);
        } else if(*rate_cmd) {
            const auto l = load_bundle(rt_input);
            const auto &fig = figure_or_throw(l.doc, rt_figure);
            const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
            const auto caption = rt_caption.value_or(fig.caption);
            const auto ctx = make_rating_context(paras, caption);
            if(rt_prompt_only) {
                std::cout << build_prompt(ctx);
                return 0;
            }
            RuleAspectBackend rules;
            const auto report = analyze(caption, fig, paras, rules);
            HeuristicRatingBackend heuristic;
            CaptionRating rating;
            if(rt_backend == "hosted") {
                HostedChatBackend hosted(HostedChatConfig::from_env());
                rating = rate_with_fallback(ctx, hosted, &heuristic, &report);
            } else {
                rating = rate(ctx, heuristic, &report);
            }
            emit(json(rating), out_path);
        } else if(*gen_cmd) {
            const auto l = load_bundle(gen_input);
            const auto &fig = figure_or_throw(l.doc, gen_figure);
            const auto paras = mention_paragraphs(l.doc, l.index, fig.id);
            RuleAspectBackend rules;
            HeuristicRatingBackend heuristic;
            ExtractiveBackend extractive;
            CaptionRater rater(rules, heuristic);
            DecodeParams params;
            params.num_beams = gen_beams;
            params.max_words = gen_max_words;
            const auto pair = generate_pair_with_ratings(fig, paras, {extractive, extractive}, rater, params);
            emit(json(pair), out_path);
        } else if(*serve_cmd) {
            auto settings = ServerSettings::load(sv_config ? std::optional<std::filesystem::path>(*sv_config)
                                                           : std::nullopt);
            if(sv_host) {
                settings.host = *sv_host;
            }
            if(sv_port) {
                settings.port = *sv_port;
            }
            if(sv_storage) {
                settings.storage = *sv_storage;
            }
            if(sv_limit) {
                settings.service.evaluation_limit = *sv_limit;
            }
            Service service(make_store(settings), make_backends(settings), settings.service);
            HttpApi api(service);
            const int port = api.bind(settings.host, settings.port);
            g_api = &api;
            std::signal(SIGINT, on_signal);
            std::signal(SIGTERM, on_signal);
            std::cerr << json{{"listening", settings.host + ":" + std::to_string(port)},
                              {"storage", settings.storage.empty() ? "memory" : settings.storage.string()},
                              {"evaluation_limit", settings.service.evaluation_limit}}
                             .dump()
                      << std::endl;
            api.listen();
            g_api = nullptr;
        } else if(*tlx_cmd) {
            const auto samples = parse_tlx_csv(read_input(tlx_input));
            std::vector<TlxPairing> pairings;
            for(const auto &p : tlx_pairs) {
                const auto colon = p.find(':');
                if(colon == std::string::npos || colon == 0 || colon + 1 == p.size()) {
                    throw Error(ErrorCode::invalid_argument, "--pair expects baseline:treatment", p);
                }
                pairings.push_back({p.substr(0, colon), p.substr(colon + 1)});
            }
            emit(tlx_report(samples, pairings, tlx_level), out_path);
        } else if(*rank_cmd) {
            const auto records = parse_ranking_csv(read_input(rank_input));
            emit(rank1_report(rank1_frequency(records)), out_path);
        }
    } catch(const Error &e) {
        std::cerr << error_body(e).dump(-1, ' ', false, json::error_handler_t::replace) << "\n";
        return 1;
    } catch(const std::exception &e) {
        std::cerr << json{{"code", "internal"}, {"message", e.what()}}.dump() << "\n";
        return 1;
    }
    return 0;
}
