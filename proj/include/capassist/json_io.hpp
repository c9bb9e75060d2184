// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/errors.hpp>
#include <capassist/generation.hpp>
#include <capassist/mentions.hpp>
#include <capassist/model.hpp>

#include <json.hpp>

// nlohmann::json conversions for the wire and storage formats. Spans are
// [begin, end] byte-offset pairs; aspect reports are objects keyed by aspect.
namespace capassist {

void to_json(nlohmann::json &j, const Span &s);
void from_json(const nlohmann::json &j, Span &s);

void to_json(nlohmann::json &j, const AspectEntry &e);
void from_json(const nlohmann::json &j, AspectEntry &e);

void to_json(nlohmann::json &j, const AspectReport &r);
void from_json(const nlohmann::json &j, AspectReport &r);

void to_json(nlohmann::json &j, const CaptionRating &r);
void from_json(const nlohmann::json &j, CaptionRating &r);

void to_json(nlohmann::json &j, const GeneratedCaption &g);
void from_json(const nlohmann::json &j, GeneratedCaption &g);

void to_json(nlohmann::json &j, const Draft &d);
void from_json(const nlohmann::json &j, Draft &d);

void to_json(nlohmann::json &j, const Evaluation &e);
void from_json(const nlohmann::json &j, Evaluation &e);

void to_json(nlohmann::json &j, const CaptionSession &s);
void from_json(const nlohmann::json &j, CaptionSession &s);

void to_json(nlohmann::json &j, const FigureRecord &f);
void to_json(nlohmann::json &j, const Paragraph &p);
void to_json(nlohmann::json &j, const MentionIndex &index);

// {code, message, detail?}
nlohmann::json error_body(const Error &e);
Error error_from_json(const nlohmann::json &j);

void to_json(nlohmann::json &j, const VariantOutcome &v);
void from_json(const nlohmann::json &j, VariantOutcome &v);

void to_json(nlohmann::json &j, const CaptionPair &p);
void from_json(const nlohmann::json &j, CaptionPair &p);

} // namespace capassist
