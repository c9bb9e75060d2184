// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/stats.hpp>

#include <json.hpp>

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace capassist {

// ---------------------------------------------------------------------------
// Workload questionnaire

inline constexpr std::array<std::string_view, 6> tlx_scales{
    "mental", "physical", "temporal", "performance", "effort", "frustration",
};

// CSV columns: participant,condition,mental,physical,temporal,performance,effort,frustration
inline constexpr std::array<std::string_view, 8> tlx_columns{
    "participant", "condition", "mental", "physical", "temporal", "performance", "effort", "frustration",
};

struct TlxSample {
    std::string participant;
    std::string condition;
    std::array<int, 6> scales{}; // integers 1..5, in tlx_scales order

    double overall() const; // mean of the six scales
};

// Strict: exact header, integer values 1..5, unique (participant, condition).
std::vector<TlxSample> parse_tlx_csv(std::string_view text);

struct TlxPairing {
    std::string baseline;  // e.g. user-only
    std::string treatment; // e.g. with-system
};

// Per condition: mean, sd and t-interval of each scale and of the overall
// index (per-participant mean of the six scales). Per pairing: paired
// two-tailed t-test of baseline vs treatment over participants. With no
// pairings given and exactly two conditions, they are paired in order of
// first appearance. Every participant of a paired condition must appear in
// the other (ValidationError otherwise).
nlohmann::json tlx_report(std::span<const TlxSample> samples, std::vector<TlxPairing> pairings = {},
                          double level = 0.95);

// ---------------------------------------------------------------------------
// Caption ranking

inline constexpr std::array<std::string_view, 4> caption_types{
    "ground_truth", "summary_short", "summary_long", "lvlm",
};

// CSV columns: item,expert,ground_truth,summary_short,summary_long,lvlm
inline constexpr std::array<std::string_view, 6> ranking_columns{
    "item", "expert", "ground_truth", "summary_short", "summary_long", "lvlm",
};

struct RankingRecord {
    std::string item;
    std::string expert;
    std::array<int, 4> ranks{}; // rank 1 is best, in caption_types order
};

std::vector<RankingRecord> parse_ranking_csv(std::string_view text);

using Rank1Counts = std::map<std::pair<std::string, std::string>, int>;

// (expert, caption type) -> number of records where that type ranked first.
// Every caption type gets an entry for each expert seen. Throws
// ValidationError("/records/<i>") when a record's ranks are not a
// permutation of 1..4.
Rank1Counts rank1_frequency(std::span<const RankingRecord> records);

nlohmann::json rank1_report(const Rank1Counts &counts);

} // namespace capassist
