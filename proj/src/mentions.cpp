// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#include <capassist/mentions.hpp>

#include <cctype>
#include <charconv>
#include <regex>

namespace capassist {

namespace {

// Separators inside an id list. Hyphen, en dash, em dash and "to" form ranges.
#define CAPASSIST_RANGE_SEP "-|\xE2\x80\x93|\xE2\x80\x94|to\\b"
#define CAPASSIST_LIST_SEP "\\s*(?:,\\s*(?:and\\b|&)?|and\\b|&|" CAPASSIST_RANGE_SEP ")\\s*"

const std::regex &mention_regex() {
    static const std::regex re(
        "\\b(?:figures?|figs?)\\b\\.?\\s*"
        "([a-z]?\\d+(?:" CAPASSIST_LIST_SEP "[a-z]?\\d+)*)(?!\\d)",
        std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    return re;
}

const std::regex &list_item_regex() {
    static const std::regex re("([a-z]?\\d+)|(" CAPASSIST_RANGE_SEP ")",
                               std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
    return re;
}

struct SplitId {
    std::string prefix;
    long long number = 0;
};

bool split_canonical(std::string_view id, SplitId &out) {
    std::size_t i = 0;
    out.prefix.clear();
    if(!id.empty() && std::isalpha(static_cast<unsigned char>(id[0]))) {
        out.prefix = id.substr(0, 1);
        i = 1;
    }
    auto digits = id.substr(i);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), out.number);
    return ec == std::errc{} && ptr == digits.data() + digits.size();
}

void add_range(const std::string &lo, const std::string &hi, const std::set<std::string> &known,
               std::set<std::string> &result) {
    SplitId a, b;
    if(!split_canonical(lo, a) || !split_canonical(hi, b) || a.prefix != b.prefix ||
       a.number > b.number) {
        // Mixed prefixes or a descending range: keep the endpoints only.
        if(known.count(lo)) result.insert(lo);
        if(known.count(hi)) result.insert(hi);
        return;
    }
    SplitId k;
    for(const auto &id : known) {
        if(split_canonical(id, k) && k.prefix == a.prefix && k.number >= a.number &&
           k.number <= b.number) {
            result.insert(id);
        }
    }
}

} // namespace

const std::vector<std::size_t> &MentionIndex::paragraphs_for(std::string_view figure_id) const {
    static const std::vector<std::size_t> empty;
    auto it = entries_.find(figure_id);
    return it == entries_.end() ? empty : it->second;
}

std::set<std::string> find_mentions(std::string_view paragraph_text,
                                    const std::set<std::string> &known_ids) {
    std::set<std::string> result;
    if(known_ids.empty()) {
        return result;
    }
    const auto &re = mention_regex();
    const auto &item_re = list_item_regex();
    using It = std::string_view::const_iterator;
    for(std::regex_iterator<It> m(paragraph_text.begin(), paragraph_text.end(), re), end; m != end;
        ++m) {
        const std::string list = (*m)[1].str();
        std::string prev;
        bool pending_range = false;
        for(std::sregex_iterator it(list.begin(), list.end(), item_re), iend; it != iend; ++it) {
            if((*it)[2].matched) {
                pending_range = !prev.empty();
                continue;
            }
            const auto id = normalize_figure_id((*it)[1].str());
            if(pending_range) {
                add_range(prev, id, known_ids, result);
                pending_range = false;
            } else if(known_ids.count(id)) {
                result.insert(id);
            }
            prev = id;
        }
    }
    return result;
}

MentionIndex build_mention_index(const Document &doc) {
    MentionIndex index;
    std::set<std::string> known;
    for(const auto &f : doc.figures) {
        known.insert(f.id);
        index.entries_[f.id];
    }
    for(const auto &p : doc.paragraphs) {
        for(const auto &id : find_mentions(p.text, known)) {
            index.entries_[id].push_back(p.index);
        }
    }
    return index;
}

MentionIndex link_paragraphs(Document &doc) {
    auto index = build_mention_index(doc);
    for(auto &p : doc.paragraphs) {
        p.mentions.clear();
    }
    for(const auto &[id, paras] : index.entries()) {
        for(auto i : paras) {
            doc.paragraphs[i].mentions.insert(id);
        }
    }
    return index;
}

std::vector<Paragraph> mention_paragraphs(const Document &doc, const MentionIndex &index,
                                          std::string_view figure_id) {
    std::vector<Paragraph> out;
    for(auto i : index.paragraphs_for(figure_id)) {
        if(i < doc.paragraphs.size()) {
            out.push_back(doc.paragraphs[i]);
        }
    }
    return out;
}

} // namespace capassist
