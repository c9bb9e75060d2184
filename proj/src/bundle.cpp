// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/bundle.hpp>
#include <capassist/digest.hpp>
#include <capassist/errors.hpp>
#include <capassist/figure_id.hpp>
#include <capassist/text.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>

namespace capassist {

using nlohmann::json;

namespace {

const json &require(const json &obj, const char *key, const std::string &path) {
    auto it = obj.find(key);
    if(it == obj.end()) {
        throw ValidationError(std::string("missing required field '") + key + "'", path + "/" + key);
    }
    return *it;
}

std::string require_string(const json &obj, const char *key, const std::string &path) {
    const auto &v = require(obj, key, path);
    if(!v.is_string()) {
        throw ValidationError(std::string("field '") + key + "' must be a string", path + "/" + key);
    }
    return v.get<std::string>();
}

double require_number(const json &obj, const char *key, const std::string &path) {
    const auto &v = require(obj, key, path);
    if(!v.is_number()) {
        throw ValidationError(std::string("field '") + key + "' must be a number", path + "/" + key);
    }
    return v.get<double>();
}

FigureRecord parse_figure(const json &jf, const std::string &path, ParseSummary &summary) {
    if(!jf.is_object()) {
        throw ValidationError("figure entry must be an object", path);
    }
    FigureRecord fig;
    const auto kind_str = require_string(jf, "kind", path);
    auto kind = figure_kind_from_string(kind_str);
    if(!kind) {
        throw ValidationError("unknown figure kind '" + kind_str + "'", path + "/kind");
    }
    fig.kind = *kind;
    if(fig.kind == FigureKind::table) {
        return fig;
    }

    const auto raw_id = require_string(jf, "id", path);
    if(!is_raw_figure_id(raw_id)) {
        throw ValidationError("figure id '" + raw_id + "' is not a valid identifier", path + "/id");
    }
    fig.id = normalize_figure_id(raw_id);

    const auto &page = require(jf, "page", path);
    if(!page.is_number_integer() || page.get<long long>() < 1) {
        throw ValidationError("page must be an integer >= 1", path + "/page");
    }
    fig.page = page.get<int>();
    fig.caption = require_string(jf, "caption", path);

    if(auto it = jf.find("region"); it != jf.end() && !it->is_null()) {
        const auto rpath = path + "/region";
        if(!it->is_object()) {
            throw ValidationError("region must be an object", rpath);
        }
        fig.region = Region{require_number(*it, "x1", rpath), require_number(*it, "y1", rpath),
                            require_number(*it, "x2", rpath), require_number(*it, "y2", rpath)};
    }
    if(auto it = jf.find("figure_text"); it != jf.end() && !it->is_null()) {
        if(!it->is_array()) {
            throw ValidationError("figure_text must be an array of strings", path + "/figure_text");
        }
        for(std::size_t i = 0; i < it->size(); ++i) {
            const auto &tok = (*it)[i];
            if(!tok.is_string()) {
                throw ValidationError("figure_text entries must be strings",
                                      path + "/figure_text/" + std::to_string(i));
            }
            auto s = tok.get<std::string>();
            if(text::trim(s).empty()) {
                ++summary.empty_figure_text_tokens_dropped;
                continue;
            }
            fig.figure_text.push_back(std::move(s));
        }
    }
    if(auto it = jf.find("image_ref"); it != jf.end() && !it->is_null()) {
        if(!it->is_string()) {
            throw ValidationError("image_ref must be a string", path + "/image_ref");
        }
        fig.image_ref = it->get<std::string>();
    }
    return fig;
}

} // namespace

BundleParse parse_bundle_with_summary(std::string_view bytes) {
    json root;
    try {
        root = json::parse(bytes.begin(), bytes.end());
    } catch(const json::parse_error &e) {
        throw ParseError(e.what(), std::min(e.byte > 0 ? e.byte - 1 : 0, bytes.size()));
    }
    if(!root.is_object()) {
        throw ValidationError("bundle must be a JSON object", "");
    }

    BundleParse out;
    auto &doc = out.document;
    doc.doc_id = require_string(root, "doc_id", "");
    doc.title = require_string(root, "title", "");
    doc.abstract = require_string(root, "abstract", "");

    const auto &paras = require(root, "paragraphs", "");
    if(!paras.is_array()) {
        throw ValidationError("paragraphs must be an array of strings", "/paragraphs");
    }
    for(std::size_t i = 0; i < paras.size(); ++i) {
        if(!paras[i].is_string()) {
            throw ValidationError("paragraph must be a string", "/paragraphs/" + std::to_string(i));
        }
        doc.paragraphs.push_back(Paragraph{i, paras[i].get<std::string>(), {}});
    }

    const auto &figs = require(root, "figures", "");
    if(!figs.is_array()) {
        throw ValidationError("figures must be an array", "/figures");
    }
    std::set<std::string> seen;
    for(std::size_t i = 0; i < figs.size(); ++i) {
        const auto path = "/figures/" + std::to_string(i);
        auto fig = parse_figure(figs[i], path, out.summary);
        if(fig.kind == FigureKind::table) {
            ++out.summary.tables_dropped;
            continue;
        }
        if(!seen.insert(fig.id).second) {
            throw ValidationError("duplicate figure id '" + fig.id + "'", path + "/id");
        }
        doc.figures.push_back(std::move(fig));
    }
    out.summary.figures_kept = doc.figures.size();

    if(auto it = root.find("source_digest"); it != root.end() && it->is_string()) {
        doc.source_digest = it->get<std::string>();
    } else {
        doc.source_digest = sha256_hex(bytes);
    }
    return out;
}

Document parse_bundle(std::string_view bytes) {
    return parse_bundle_with_summary(bytes).document;
}

std::string serialize_bundle(const Document &doc, int indent) {
    nlohmann::ordered_json root;
    root["doc_id"] = doc.doc_id;
    root["title"] = doc.title;
    root["abstract"] = doc.abstract;
    auto paras = nlohmann::ordered_json::array();
    for(const auto &p : doc.paragraphs) {
        paras.push_back(p.text);
    }
    root["paragraphs"] = std::move(paras);
    auto figs = nlohmann::ordered_json::array();
    for(const auto &f : doc.figures) {
        nlohmann::ordered_json jf;
        jf["id"] = f.id;
        jf["kind"] = to_string(f.kind);
        jf["page"] = f.page;
        jf["caption"] = f.caption;
        if(f.region) {
            jf["region"] = {{"x1", f.region->x1}, {"y1", f.region->y1},
                            {"x2", f.region->x2}, {"y2", f.region->y2}};
        }
        if(!f.figure_text.empty()) {
            jf["figure_text"] = f.figure_text;
        }
        if(f.image_ref) {
            jf["image_ref"] = *f.image_ref;
        }
        figs.push_back(std::move(jf));
    }
    root["figures"] = std::move(figs);
    root["source_digest"] = doc.source_digest;
    return root.dump(indent, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

} // namespace capassist
