// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The capassist authors

#pragma once

#include <capassist/figure_id.hpp>
#include <capassist/model.hpp>

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace capassist {

// Figure id -> indices of the paragraphs mentioning it, strictly increasing.
// Every figure of the linked document has a key, possibly with no paragraphs.
class MentionIndex {
public:
    const std::vector<std::size_t> &paragraphs_for(std::string_view figure_id) const;
    const std::map<std::string, std::vector<std::size_t>, std::less<>> &entries() const {
        return entries_;
    }

    bool operator==(const MentionIndex &) const = default;

private:
    friend MentionIndex build_mention_index(const Document &doc);
    std::map<std::string, std::vector<std::size_t>, std::less<>> entries_;
};

// Figure ids referenced in running text: "Figure 3", "Fig. 3", "Figs. 1, 2,
// and 5", "Figures 3 and 4", ranges "Figures 1-3" / "1–3" / "1 to 3" (expanded).
// Matching is case-insensitive on word boundaries, so "configure 3" is not a
// mention. A descending range "5-3" counts as the two endpoints. The result is
// restricted to `known_ids`.
std::set<std::string> find_mentions(std::string_view paragraph_text,
                                    const std::set<std::string> &known_ids);

MentionIndex build_mention_index(const Document &doc);

// Builds the index and fills Paragraph::mentions to match it.
MentionIndex link_paragraphs(Document &doc);

// Paragraphs mentioning `figure_id`, in document order.
std::vector<Paragraph> mention_paragraphs(const Document &doc, const MentionIndex &index,
                                          std::string_view figure_id);

} // namespace capassist
