#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kbfocus/baselines.hpp"
#include "kbfocus/errors.hpp"
#include "kbfocus/metrics.hpp"
#include "kbfocus/ranked_list.hpp"
#include "kbfocus/schema.hpp"

namespace kbfocus {

enum class Metric { focus, tfidf, bm25, cmm, dem };

inline constexpr std::string_view kMetricNames[] = {"focus", "tfidf", "bm25", "cmm", "dem"};

inline Metric parse_metric(std::string_view name) {
    for (std::size_t i = 0; i < std::size(kMetricNames); ++i)
        if (name == kMetricNames[i]) return static_cast<Metric>(i);
    throw ValidationError("unknown metric \"" + std::string(name) +
                          "\" (expected focus|tfidf|bm25|cmm|dem)");
}

struct RankParams {
    Bm25Params bm25;
    CmmWeights cmm;
    DemWeights dem;
    QueryTerms query; // cmm only
};

inline RankedList focus_rank(const Schema& schema) {
    MetricIndex ix(schema);
    std::vector<RankedEntry> entries;
    for (std::size_t i = 0; i < schema.entity_types.size(); ++i) {
        const auto& e = schema.entity_types[i];
        entries.push_back({e.id, e.label, ix.focus_e(i)});
    }
    return make_ranked_list(schema.name, "focus", std::move(entries));
}

/// Full ranking of every entity type under the named metric.
inline RankedList rank_entity_types(const Schema& schema, Metric metric,
                                    const RankParams& params = {}) {
    switch (metric) {
        case Metric::focus: return focus_rank(schema);
        case Metric::tfidf: return tfidf_rank(schema);
        case Metric::bm25: return bm25_rank(schema, params.bm25);
        case Metric::cmm: return cmm_rank(schema, params.query, params.cmm);
        case Metric::dem: return dem_rank(schema, params.dem);
    }
    throw ValidationError("unknown metric");
}

/// Entity types regarded as relevant for one schema. The list is treated
/// as an unordered relevance set.
struct ReferenceRanking {
    std::string schema;
    std::vector<std::string> entities;
};

inline ReferenceRanking parse_reference(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid reference ranking JSON: ") + e.what());
    }
    ReferenceRanking ref;
    try {
        ref.schema = doc.at("schema").get<std::string>();
        for (const auto& e : doc.at("entities")) ref.entities.push_back(e.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("reference ranking must be {\"schema\", \"entities\"}: ") +
                         e.what());
    }
    return ref;
}

/// Share of the ranking's top min(k,|ranked|) entries that appear in the
/// reference set, over min(k, |ref|).
inline double topk_overlap_accuracy(const RankedList& ranked, const ReferenceRanking& ref,
                                    std::size_t k = 10) {
    if (k < 1) throw ValidationError("top-k overlap requires k >= 1");
    if (ref.entities.empty())
        throw UndefinedMetricError("reference ranking for \"" + ref.schema + "\" is empty");
    const std::set<std::string> relevant(ref.entities.begin(), ref.entities.end());
    const std::size_t take = std::min(k, ranked.entries.size());
    std::size_t hits = 0;
    for (std::size_t i = 0; i < take; ++i)
        if (relevant.count(ranked.entries[i].id)) ++hits;
    return static_cast<double>(hits) /
           static_cast<double>(std::min(k, relevant.size()));
}

struct ComparisonRow {
    std::string schema;
    double accuracy[5] = {0, 0, 0, 0, 0}; // focus, tfidf, bm25, cmm, dem
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows; // ascending schema name
    double mean[5] = {0, 0, 0, 0, 0};
    std::vector<std::string> missing_reference; // excluded schemas
};

/// Per-schema top-k accuracy of every ranker against its reference set,
/// plus per-ranker arithmetic means. Schemas without a reference are
/// listed and excluded from the means. Reference ids must resolve.
inline ComparisonTable compare_rankers(const std::vector<Schema>& schemas,
                                       const std::map<std::string, ReferenceRanking>& refs,
                                       std::size_t k = 10, const RankParams& params = {}) {
    std::vector<const Schema*> ordered;
    for (const auto& s : schemas) ordered.push_back(&s);
    std::sort(ordered.begin(), ordered.end(),
              [](const Schema* a, const Schema* b) { return a->name < b->name; });

    ComparisonTable table;
    for (const Schema* s : ordered) {
        auto rit = refs.find(s->name);
        if (rit == refs.end()) {
            table.missing_reference.push_back(s->name);
            continue;
        }
        for (const auto& id : rit->second.entities)
            if (!s->find_entity(id))
                throw ValidationError("reference for \"" + s->name +
                                      "\" names unknown entity type \"" + id + "\"");
        ComparisonRow row;
        row.schema = s->name;
        for (int m = 0; m < 5; ++m)
            row.accuracy[m] = topk_overlap_accuracy(
                rank_entity_types(*s, static_cast<Metric>(m), params), rit->second, k);
        table.rows.push_back(std::move(row));
    }
    if (!table.rows.empty())
        for (int m = 0; m < 5; ++m) {
            double acc = 0.0;
            for (const auto& row : table.rows) acc += row.accuracy[m];
            table.mean[m] = acc / static_cast<double>(table.rows.size());
        }
    return table;
}

inline std::string to_csv(const ComparisonTable& table) {
    std::string out = "schema,focus,tfidf,bm25,cmm,dem\n";
    for (const auto& row : table.rows) {
        out += row.schema;
        for (double a : row.accuracy) out += ',' + detail::fmt6(a);
        out += '\n';
    }
    out += "MEAN";
    for (double a : table.mean) out += ',' + detail::fmt6(a);
    out += '\n';
    return out;
}

struct SchemaRankRow {
    std::string name;
    double focus_k = 0.0;
    std::optional<double> balance;
    std::optional<double> cue_cr;
};

/// Schemas ordered by descending Focus(K); ties break by ascending name.
inline std::vector<SchemaRankRow> rank_schemas(const std::vector<MetricReport>& reports) {
    std::vector<SchemaRankRow> rows;
    for (const auto& r : reports) rows.push_back({r.schema, r.focus_k, r.balance, r.cue_cr});
    std::sort(rows.begin(), rows.end(), [](const SchemaRankRow& a, const SchemaRankRow& b) {
        if (a.focus_k != b.focus_k) return a.focus_k > b.focus_k;
        return a.name < b.name;
    });
    return rows;
}

inline std::vector<SchemaRankRow> rank_schemas(const std::vector<Schema>& schemas) {
    std::vector<MetricReport> reports;
    reports.reserve(schemas.size());
    for (const auto& s : schemas) reports.push_back(metric_report(s));
    return rank_schemas(reports);
}

inline std::string to_csv(const std::vector<SchemaRankRow>& rows) {
    std::string out = "rank,schema,focus_k,balance,cue_cr\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        out += std::to_string(i + 1) + ',' + r.name + ',' + detail::fmt6(r.focus_k) + ',';
        out += (r.balance ? detail::fmt6(*r.balance) : "") + std::string(1, ',');
        out += (r.cue_cr ? detail::fmt6(*r.cue_cr) : "") + "\n";
    }
    return out;
}

inline nlohmann::json to_json(const std::vector<SchemaRankRow>& rows) {
    nlohmann::json doc = nlohmann::json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        doc.push_back({{"rank", i + 1},
                       {"schema", r.name},
                       {"focus_k", r.focus_k},
                       {"balance", r.balance ? nlohmann::json(*r.balance) : nlohmann::json()},
                       {"cue_cr", r.cue_cr ? nlohmann::json(*r.cue_cr) : nlohmann::json()}});
    }
    return doc;
}

inline nlohmann::json to_json(const ComparisonTable& table) {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json r{{"schema", row.schema}};
        for (int m = 0; m < 5; ++m) r[std::string(kMetricNames[m])] = row.accuracy[m];
        doc["rows"].push_back(std::move(r));
    }
    doc["mean"] = nlohmann::json::object();
    for (int m = 0; m < 5; ++m) doc["mean"][std::string(kMetricNames[m])] = table.mean[m];
    doc["missing_reference"] = table.missing_reference;
    return doc;
}

/// Lowercased labels of the top-k entity types by Focus(e), duplicates
/// collapsed (first occurrence wins).
inline std::vector<std::string> derive_schema_tags(const Schema& schema, std::size_t k = 5) {
    const RankedList ranked = focus_rank(schema);
    const std::size_t take = std::min(k, ranked.entries.size());
    std::vector<std::string> tags;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < take; ++i) {
        std::string tag;
        for (char c : ranked.entries[i].label)
            tag += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (seen.insert(tag).second) tags.push_back(std::move(tag));
    }
    return tags;
}

} // namespace kbfocus
