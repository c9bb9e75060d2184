// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/json_io.hpp>

namespace capassist {

using nlohmann::json;

namespace {

Satisfied satisfied_from_json(const json &j) {
    if(j.is_boolean()) {
        return j.get<bool>() ? Satisfied::yes : Satisfied::no;
    }
    const auto s = j.get<std::string>();
    if(s == "yes") {
        return Satisfied::yes;
    }
    if(s == "no") {
        return Satisfied::no;
    }
    if(s == "unknown") {
        return Satisfied::unknown;
    }
    throw ValidationError("unknown satisfied value '" + s + "'", "/satisfied");
}

ErrorCode error_code_from_string(std::string_view s) {
    for(int i = 0; i <= static_cast<int>(ErrorCode::degenerate_sample); ++i) {
        const auto code = static_cast<ErrorCode>(i);
        if(to_string(code) == s) {
            return code;
        }
    }
    return ErrorCode::invalid_argument;
}

} // namespace

void to_json(json &j, const Span &s) { j = json::array({s.begin, s.end}); }

void from_json(const json &j, Span &s) {
    s.begin = j.at(0).get<std::size_t>();
    s.end = j.at(1).get<std::size_t>();
}

void to_json(json &j, const AspectEntry &e) {
    j = json{{"satisfied", to_string(e.satisfied)}, {"evidence", e.evidence}, {"backend_id", e.backend_id}};
}

void from_json(const json &j, AspectEntry &e) {
    e.satisfied = satisfied_from_json(j.at("satisfied"));
    e.evidence = j.value("evidence", std::vector<Span>{});
    e.backend_id = j.value("backend_id", std::string{});
}

void to_json(json &j, const AspectReport &r) {
    j = json::object();
    for(auto a : all_aspects) {
        j[std::string(to_string(a))] = r[a];
    }
}

void from_json(const json &j, AspectReport &r) {
    for(auto a : all_aspects) {
        r[a] = j.at(std::string(to_string(a))).get<AspectEntry>();
    }
}

void to_json(json &j, const CaptionRating &r) {
    j = json{{"score", r.score}, {"explanation", r.explanation}, {"backend_id", r.backend_id}};
    if(r.raw_response) {
        j["raw_response"] = *r.raw_response;
    }
}

void from_json(const json &j, CaptionRating &r) {
    r.score = j.at("score").get<int>();
    r.explanation = j.value("explanation", std::string{});
    r.backend_id = j.value("backend_id", std::string{});
    if(j.contains("raw_response") && j["raw_response"].is_string()) {
        r.raw_response = j["raw_response"].get<std::string>();
    } else {
        r.raw_response.reset();
    }
}

void to_json(json &j, const GeneratedCaption &g) {
    j = json{{"variant", to_string(g.variant)}, {"text", g.text}, {"backend_id", g.backend_id}};
    j["rating"] = g.rating ? json(*g.rating) : json(nullptr);
}

void from_json(const json &j, GeneratedCaption &g) {
    const auto v = variant_from_string(j.at("variant").get<std::string>());
    if(!v) {
        throw ValidationError("unknown variant", "/variant");
    }
    g.variant = *v;
    g.text = j.at("text").get<std::string>();
    g.backend_id = j.value("backend_id", std::string{});
    if(j.contains("rating") && !j["rating"].is_null()) {
        g.rating = j["rating"].get<CaptionRating>();
    } else {
        g.rating.reset();
    }
}

void to_json(json &j, const Draft &d) { j = json{{"caption", d.caption}, {"timestamp_ms", d.timestamp_ms}}; }

void from_json(const json &j, Draft &d) {
    d.caption = j.at("caption").get<std::string>();
    d.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
}

void to_json(json &j, const Evaluation &e) {
    j = json{{"caption", e.caption},
             {"report", e.report},
             {"rating", e.rating},
             {"timestamp_ms", e.timestamp_ms}};
}

void from_json(const json &j, Evaluation &e) {
    e.caption = j.at("caption").get<std::string>();
    e.report = j.at("report").get<AspectReport>();
    e.rating = j.at("rating").get<CaptionRating>();
    e.timestamp_ms = j.at("timestamp_ms").get<std::int64_t>();
}

void to_json(json &j, const CaptionSession &s) {
    j = json{{"doc_id", s.doc_id},
             {"figure_id", s.figure_id},
             {"drafts", s.drafts},
             {"evaluations", s.evaluations},
             {"evaluation_limit", s.evaluation_limit}};
}

void from_json(const json &j, CaptionSession &s) {
    s.doc_id = j.at("doc_id").get<std::string>();
    s.figure_id = j.at("figure_id").get<std::string>();
    s.drafts = j.at("drafts").get<std::vector<Draft>>();
    s.evaluations = j.at("evaluations").get<std::vector<Evaluation>>();
    s.evaluation_limit = j.value("evaluation_limit", default_evaluation_limit);
}

void to_json(json &j, const FigureRecord &f) {
    j = json{{"id", f.id}, {"kind", to_string(f.kind)}, {"caption", f.caption}, {"page", f.page}};
    if(f.region) {
        j["region"] = {{"x1", f.region->x1}, {"y1", f.region->y1}, {"x2", f.region->x2}, {"y2", f.region->y2}};
    } else {
        j["region"] = nullptr;
    }
    j["figure_text"] = f.figure_text;
    j["image_ref"] = f.image_ref ? json(*f.image_ref) : json(nullptr);
}

void to_json(json &j, const Paragraph &p) {
    j = json{{"index", p.index}, {"text", p.text}, {"mentions", p.mentions}};
}

void to_json(json &j, const MentionIndex &index) {
    j = json::object();
    for(const auto &[id, paras] : index.entries()) {
        j[id] = paras;
    }
}

json error_body(const Error &e) {
    json body{{"code", to_string(e.code())}, {"message", e.what()}};
    if(!e.detail().empty()) {
        body["detail"] = e.detail();
    }
    return body;
}

Error error_from_json(const json &j) {
    return Error(error_code_from_string(j.value("code", std::string{})), j.value("message", std::string{}),
                 j.value("detail", std::string{}));
}

void to_json(json &j, const VariantOutcome &v) {
    if(v.caption) {
        j = json{{"ok", true}, {"caption", *v.caption}};
    } else {
        j = json{{"ok", false}, {"error", v.error ? error_body(*v.error) : json(nullptr)}};
    }
}

void from_json(const json &j, VariantOutcome &v) {
    v.caption.reset();
    v.error.reset();
    if(j.value("ok", false)) {
        v.caption = j.at("caption").get<GeneratedCaption>();
    } else if(j.contains("error") && j["error"].is_object()) {
        v.error = error_from_json(j["error"]);
    }
}

void to_json(json &j, const CaptionPair &p) {
    j = json{{"long", p.long_caption}, {"short", p.short_caption}};
}

void from_json(const json &j, CaptionPair &p) {
    p.long_caption = j.at("long").get<VariantOutcome>();
    p.short_caption = j.at("short").get<VariantOutcome>();
}

} // namespace capassist
