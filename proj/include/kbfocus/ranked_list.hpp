#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "kbfocus/metrics.hpp"

namespace kbfocus {

struct RankedEntry {
    std::string id;
    std::string label;
    double score = 0.0;

    friend bool operator==(const RankedEntry&, const RankedEntry&) = default;
};

/// Entity types ordered by descending score; equal scores break by
/// ascending id, so every ranking is deterministic.
struct RankedList {
    std::string schema;
    std::string metric;
    std::vector<RankedEntry> entries;
};

inline RankedList make_ranked_list(std::string schema, std::string metric,
                                   std::vector<RankedEntry> entries) {
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    return {std::move(schema), std::move(metric), std::move(entries)};
}

inline std::string to_csv(const RankedList& list) {
    std::string out = "rank,id,label,score\n";
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& e = list.entries[i];
        out += std::to_string(i + 1) + ',' + e.id + ',' + e.label + ',' +
               detail::fmt6(e.score) + '\n';
    }
    return out;
}

inline nlohmann::json to_json(const RankedList& list) {
    nlohmann::json doc;
    doc["schema"] = list.schema;
    doc["metric"] = list.metric;
    doc["entries"] = nlohmann::json::array();
    for (std::size_t i = 0; i < list.entries.size(); ++i) {
        const auto& e = list.entries[i];
        doc["entries"].push_back(
            {{"rank", i + 1}, {"id", e.id}, {"label", e.label}, {"score", e.score}});
    }
    return doc;
}

} // namespace kbfocus
