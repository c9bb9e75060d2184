// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/csv.hpp>
#include <capassist/errors.hpp>
#include <capassist/study.hpp>
#include <capassist/text.hpp>

#include <algorithm>
#include <cmath>
#include <set>

namespace capassist {

using nlohmann::json;

namespace {

int parse_int_field(std::string_view field, const CsvRow &row, std::string_view column) {
    const auto t = text::trim(field);
    int value = 0;
    bool ok = !t.empty();
    for(std::size_t i = 0; ok && i < t.size(); ++i) {
        ok = t[i] >= '0' && t[i] <= '9' && value < 100000;
        value = value * 10 + (t[i] - '0');
    }
    if(!ok) {
        throw ValidationError("column '" + std::string(column) + "' is not an integer: '" + std::string(field) + "'",
                              "/line/" + std::to_string(row.line));
    }
    return value;
}

json summary_json(std::span<const double> xs, double level) {
    const double m = stats::mean(xs);
    json out{{"n", xs.size()}, {"mean", m}};
    if(xs.size() >= 2) {
        const double sd = stats::sample_sd(xs);
        const auto ci = stats::t_confidence_interval(m, sd, static_cast<int>(xs.size()), level);
        out["sd"] = sd;
        out["ci"] = {ci.lo, ci.hi};
    } else {
        out["sd"] = nullptr;
        out["ci"] = nullptr;
    }
    return out;
}

json ttest_json(std::span<const double> a, std::span<const double> b) {
    try {
        const auto r = stats::paired_t_test(a, b);
        return json{{"t", r.t}, {"df", r.df}, {"p", r.p_two_tailed}};
    } catch(const Error &e) {
        return json{{"t", nullptr}, {"df", static_cast<int>(a.size()) - 1}, {"p", nullptr}, {"note", e.what()}};
    }
}

} // namespace

double TlxSample::overall() const {
    double s = 0;
    for(int v : scales) {
        s += v;
    }
    return s / static_cast<double>(scales.size());
}

std::vector<TlxSample> parse_tlx_csv(std::string_view text) {
    const auto table = parse_csv_strict(text, tlx_columns);
    std::vector<TlxSample> out;
    std::set<std::pair<std::string, std::string>> seen;
    for(const auto &row : table.rows) {
        TlxSample s;
        s.participant = std::string(text::trim(row.fields[0]));
        s.condition = std::string(text::trim(row.fields[1]));
        if(s.participant.empty() || s.condition.empty()) {
            throw ValidationError("participant and condition must be non-empty", "/line/" + std::to_string(row.line));
        }
        for(std::size_t k = 0; k < tlx_scales.size(); ++k) {
            const int v = parse_int_field(row.fields[k + 2], row, tlx_scales[k]);
            if(v < 1 || v > 5) {
                throw ValidationError("column '" + std::string(tlx_scales[k]) + "' must be 1..5, got " +
                                          std::to_string(v),
                                      "/line/" + std::to_string(row.line));
            }
            s.scales[k] = v;
        }
        if(!seen.insert({s.participant, s.condition}).second) {
            throw ValidationError("duplicate participant/condition '" + s.participant + "/" + s.condition + "'",
                                  "/line/" + std::to_string(row.line));
        }
        out.push_back(std::move(s));
    }
    return out;
}

json tlx_report(std::span<const TlxSample> samples, std::vector<TlxPairing> pairings, double level) {
    std::vector<std::string> conditions;
    std::map<std::string, std::map<std::string, const TlxSample *>> by_condition;
    for(const auto &s : samples) {
        if(!by_condition.count(s.condition)) {
            conditions.push_back(s.condition);
        }
        by_condition[s.condition][s.participant] = &s;
    }
    if(pairings.empty() && conditions.size() == 2) {
        pairings.push_back({conditions[0], conditions[1]});
    }

    json report{{"level", level}, {"conditions", json::array()}, {"comparisons", json::array()}};
    for(const auto &c : conditions) {
        const auto &rows = by_condition[c];
        json entry{{"condition", c}, {"n", rows.size()}, {"scales", json::object()}};
        for(std::size_t k = 0; k < tlx_scales.size(); ++k) {
            std::vector<double> xs;
            for(const auto &[p, s] : rows) {
                xs.push_back(s->scales[k]);
            }
            entry["scales"][std::string(tlx_scales[k])] = summary_json(xs, level);
        }
        std::vector<double> overall;
        for(const auto &[p, s] : rows) {
            overall.push_back(s->overall());
        }
        entry["overall"] = summary_json(overall, level);
        report["conditions"].push_back(std::move(entry));
    }

    for(const auto &pair : pairings) {
        auto a_it = by_condition.find(pair.baseline);
        auto b_it = by_condition.find(pair.treatment);
        if(a_it == by_condition.end() || b_it == by_condition.end()) {
            throw ValidationError("unknown condition in pairing '" + pair.baseline + ":" + pair.treatment + "'",
                                  "/pairings");
        }
        const auto &a = a_it->second;
        const auto &b = b_it->second;
        for(const auto &[p, s] : a) {
            if(!b.count(p)) {
                throw ValidationError("participant '" + p + "' has no '" + pair.treatment + "' row", "/pairings");
            }
        }
        for(const auto &[p, s] : b) {
            if(!a.count(p)) {
                throw ValidationError("participant '" + p + "' has no '" + pair.baseline + "' row", "/pairings");
            }
        }
        json cmp{{"baseline", pair.baseline}, {"treatment", pair.treatment}, {"n", a.size()},
                 {"scales", json::object()}};
        for(std::size_t k = 0; k <= tlx_scales.size(); ++k) {
            std::vector<double> xa;
            std::vector<double> xb;
            for(const auto &[p, s] : a) {
                const auto *t = b.at(p);
                xa.push_back(k < tlx_scales.size() ? s->scales[k] : s->overall());
                xb.push_back(k < tlx_scales.size() ? t->scales[k] : t->overall());
            }
            auto result = xa.size() >= 2 ? ttest_json(xa, xb) : json{{"p", nullptr}, {"note", "fewer than two pairs"}};
            if(k < tlx_scales.size()) {
                cmp["scales"][std::string(tlx_scales[k])] = std::move(result);
            } else {
                cmp["overall"] = std::move(result);
            }
        }
        report["comparisons"].push_back(std::move(cmp));
    }
    return report;
}

// ---------------------------------------------------------------------------

std::vector<RankingRecord> parse_ranking_csv(std::string_view text) {
    const auto table = parse_csv_strict(text, ranking_columns);
    std::vector<RankingRecord> out;
    for(const auto &row : table.rows) {
        RankingRecord r;
        r.item = std::string(text::trim(row.fields[0]));
        r.expert = std::string(text::trim(row.fields[1]));
        if(r.expert.empty()) {
            throw ValidationError("expert must be non-empty", "/line/" + std::to_string(row.line));
        }
        for(std::size_t k = 0; k < caption_types.size(); ++k) {
            r.ranks[k] = parse_int_field(row.fields[k + 2], row, caption_types[k]);
        }
        out.push_back(std::move(r));
    }
    return out;
}

Rank1Counts rank1_frequency(std::span<const RankingRecord> records) {
    Rank1Counts counts;
    for(std::size_t i = 0; i < records.size(); ++i) {
        const auto &r = records[i];
        auto sorted = r.ranks;
        std::sort(sorted.begin(), sorted.end());
        if(sorted != std::array<int, 4>{1, 2, 3, 4}) {
            throw ValidationError("ranks of item '" + r.item + "' by expert '" + r.expert +
                                      "' are not a permutation of 1..4",
                                  "/records/" + std::to_string(i));
        }
        for(std::size_t k = 0; k < caption_types.size(); ++k) {
            auto &slot = counts[{r.expert, std::string(caption_types[k])}];
            if(r.ranks[k] == 1) {
                ++slot;
            }
        }
    }
    return counts;
}

json rank1_report(const Rank1Counts &counts) {
    json experts = json::object();
    for(const auto &[key, n] : counts) {
        auto &e = experts[key.first];
        e[key.second] = n;
    }
    for(auto &[expert, row] : experts.items()) {
        int total = 0;
        for(auto t : caption_types) {
            total += row.value(std::string(t), 0);
        }
        row["records"] = total;
    }
    return json{{"rank1", experts}};
}

} // namespace capassist
