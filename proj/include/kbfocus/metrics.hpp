#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdio>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "kbfocus/errors.hpp"
#include "kbfocus/schema.hpp"

namespace kbfocus {

// Bumped whenever a metric definition changes; cached reports keyed on it.
inline constexpr std::string_view kMetricSuiteVersion = "1";

namespace detail {

// Sum in ascending value order: the result depends only on the multiset
// of addends, so renaming or reordering entity types cannot change it.
inline double sorted_sum(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double acc = 0.0;
    for (double v : values) acc += v;
    return acc;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

inline std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

} // namespace detail

/// Per-schema index of the cue-validity metric family.
///
/// cv(p,e) is read as P(e|p) under a uniform prior over the types that
/// carry p: 1/df(p) when e carries p, else 0. Per entity type,
/// Cue_er(e) = sum of cv over the type's properties and NCue(e) is that
/// sum divided by the property count. Per-entity sums are evaluated by
/// grouping properties on their df value (count_d / d, ascending d),
/// which keeps the uniform corner cases exact: a fully shared property
/// set of size m over n types gives NCue = m/(n*m) = 1/n in one division.
class MetricIndex {
public:
    explicit MetricIndex(const Schema& schema) : schema_(&schema) {
        const auto& props = schema.properties;
        prop_pos_.reserve(props.size());
        for (std::size_t i = 0; i < props.size(); ++i) prop_pos_.emplace(props[i].id, i);
        df_.assign(props.size(), 0);
        for (const auto& e : schema.entity_types)
            for (const auto& pid : e.properties) ++df_[prop_pos_.at(pid)];

        const auto& types = schema.entity_types;
        entity_pos_.reserve(types.size());
        cue_er_.resize(types.size());
        ncue_.resize(types.size());
        for (std::size_t i = 0; i < types.size(); ++i) {
            entity_pos_.emplace(types[i].id, i);
            std::map<std::size_t, std::size_t> by_df; // df -> property count
            for (const auto& pid : types[i].properties) ++by_df[df_[prop_pos_.at(pid)]];
            const std::size_t m = types[i].properties.size();
            double er = 0.0, nc = 0.0;
            for (const auto& [d, c] : by_df) {
                er += static_cast<double>(c) / static_cast<double>(d);
                nc += static_cast<double>(c) / (static_cast<double>(d) * static_cast<double>(m));
            }
            cue_er_[i] = er;
            ncue_[i] = detail::clamp01(nc);
        }
    }

    const Schema& schema() const { return *schema_; }

    std::size_t entity_index(std::string_view id) const {
        auto it = entity_pos_.find(std::string(id));
        if (it == entity_pos_.end())
            throw LookupError("unknown entity type \"" + std::string(id) + "\"");
        return it->second;
    }

    std::size_t df(std::string_view property_id) const {
        auto it = prop_pos_.find(std::string(property_id));
        if (it == prop_pos_.end())
            throw LookupError("unknown property \"" + std::string(property_id) + "\"");
        return df_[it->second];
    }

    double cue_validity(std::string_view property_id, std::string_view entity_id) const {
        const std::size_t d = df(property_id);
        const EntityType& e = schema_->entity_types[entity_index(entity_id)];
        const bool owns = std::binary_search(e.properties.begin(), e.properties.end(),
                                             std::string(property_id));
        return owns ? 1.0 / static_cast<double>(d) : 0.0;
    }

    double cue_er(std::size_t entity) const { return cue_er_[entity]; }
    double ncue(std::size_t entity) const { return ncue_[entity]; }
    double focus_e(std::size_t entity) const { return cue_er_[entity]; }

    std::size_t incidences() const {
        std::size_t total = 0;
        for (const auto& e : schema_->entity_types) total += e.properties.size();
        return total;
    }

    /// Micro-average: sum of Cue_er over types divided by total incidences.
    double cue_cr() const {
        const std::size_t total = incidences();
        if (total == 0)
            throw UndefinedMetricError("Cue_cr undefined: schema \"" + schema_->name +
                                       "\" has no incidences");
        return detail::clamp01(detail::sorted_sum(cue_er_) / static_cast<double>(total));
    }

    /// |E| / |P|.
    double balance() const {
        if (schema_->properties.empty())
            throw UndefinedMetricError("balance undefined: schema \"" + schema_->name +
                                       "\" has no properties");
        return static_cast<double>(schema_->entity_types.size()) /
               static_cast<double>(schema_->properties.size());
    }

    /// Macro-average of NCue. 1 exactly iff no property is shared and no
    /// entity type is property-less; a uniform schema returns the common
    /// NCue value untouched.
    double focus_k() const {
        const auto [lo, hi] = std::minmax_element(ncue_.begin(), ncue_.end());
        if (*lo == *hi) return *lo;
        return detail::clamp01(detail::sorted_sum(ncue_) /
                               static_cast<double>(ncue_.size()));
    }

private:
    const Schema* schema_;
    std::unordered_map<std::string, std::size_t> prop_pos_;
    std::unordered_map<std::string, std::size_t> entity_pos_;
    std::vector<std::size_t> df_;
    std::vector<double> cue_er_;
    std::vector<double> ncue_;
};

inline double cue_validity(const Schema& schema, std::string_view property_id,
                           std::string_view entity_id) {
    return MetricIndex(schema).cue_validity(property_id, entity_id);
}

inline double cue_er(const Schema& schema, std::string_view entity_id) {
    MetricIndex ix(schema);
    return ix.cue_er(ix.entity_index(entity_id));
}

inline double normalized_cue(const Schema& schema, std::string_view entity_id) {
    MetricIndex ix(schema);
    return ix.ncue(ix.entity_index(entity_id));
}

inline double focus_e(const Schema& schema, std::string_view entity_id) {
    MetricIndex ix(schema);
    return ix.focus_e(ix.entity_index(entity_id));
}

inline double cue_cr(const Schema& schema) { return MetricIndex(schema).cue_cr(); }
inline double balance(const Schema& schema) { return MetricIndex(schema).balance(); }
inline double focus_k(const Schema& schema) { return MetricIndex(schema).focus_k(); }

struct EntityMetrics {
    std::string id;
    std::string label;
    std::size_t n_properties = 0;
    double cue_er = 0.0;
    double ncue = 0.0;
    double focus = 0.0;
};

struct MetricReport {
    std::string schema;
    std::string suite_version;
    std::vector<EntityMetrics> entities; // in entity-id order
    std::size_t entity_types = 0;
    std::size_t properties = 0;
    std::size_t incidences = 0;
    double density = 0.0;
    std::optional<double> cue_cr; // empty when undefined
    std::optional<double> balance;
    double focus_k = 0.0;
    std::vector<std::string> undefined;
};

/// All metrics in one deterministic pass. Undefined per-schema metrics
/// are flagged rather than thrown, so a report is always produced.
inline MetricReport metric_report(const Schema& schema) {
    MetricIndex ix(schema);
    MetricReport r;
    r.schema = schema.name;
    r.suite_version = std::string(kMetricSuiteVersion);
    const SchemaStats stats = schema_stats(schema);
    r.entity_types = stats.entity_types;
    r.properties = stats.properties;
    r.incidences = stats.incidences;
    r.density = stats.density;
    for (std::size_t i = 0; i < schema.entity_types.size(); ++i) {
        const auto& e = schema.entity_types[i];
        r.entities.push_back({e.id, e.label, e.properties.size(),
                              ix.cue_er(i), ix.ncue(i), ix.focus_e(i)});
    }
    try {
        r.cue_cr = ix.cue_cr();
    } catch (const UndefinedMetricError&) {
        r.undefined.push_back("cue_cr");
    }
    try {
        r.balance = ix.balance();
    } catch (const UndefinedMetricError&) {
        r.undefined.push_back("balance");
    }
    r.focus_k = ix.focus_k();
    return r;
}

inline nlohmann::json to_json(const MetricReport& r) {
    nlohmann::json doc;
    doc["schema"] = r.schema;
    doc["suite_version"] = r.suite_version;
    doc["entities"] = nlohmann::json::array();
    for (const auto& e : r.entities)
        doc["entities"].push_back({{"id", e.id},
                                   {"label", e.label},
                                   {"n_properties", e.n_properties},
                                   {"cue_er", e.cue_er},
                                   {"ncue", e.ncue},
                                   {"focus_e", e.focus}});
    doc["summary"] = {{"entity_types", r.entity_types},
                      {"properties", r.properties},
                      {"incidences", r.incidences},
                      {"density", r.density},
                      {"cue_cr", r.cue_cr ? nlohmann::json(*r.cue_cr) : nlohmann::json()},
                      {"balance", r.balance ? nlohmann::json(*r.balance) : nlohmann::json()},
                      {"focus_k", r.focus_k}};
    doc["undefined"] = r.undefined;
    return doc;
}

inline MetricReport metric_report_from_json(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid metric report JSON: ") + e.what());
    }
    MetricReport r;
    try {
        r.schema = doc.at("schema").get<std::string>();
        r.suite_version = doc.at("suite_version").get<std::string>();
        for (const auto& e : doc.at("entities"))
            r.entities.push_back({e.at("id").get<std::string>(), e.at("label").get<std::string>(),
                                  e.at("n_properties").get<std::size_t>(),
                                  e.at("cue_er").get<double>(), e.at("ncue").get<double>(),
                                  e.at("focus_e").get<double>()});
        const auto& s = doc.at("summary");
        r.entity_types = s.at("entity_types").get<std::size_t>();
        r.properties = s.at("properties").get<std::size_t>();
        r.incidences = s.at("incidences").get<std::size_t>();
        r.density = s.at("density").get<double>();
        if (!s.at("cue_cr").is_null()) r.cue_cr = s.at("cue_cr").get<double>();
        if (!s.at("balance").is_null()) r.balance = s.at("balance").get<double>();
        r.focus_k = s.at("focus_k").get<double>();
        for (const auto& u : doc.at("undefined")) r.undefined.push_back(u.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed metric report: ") + e.what());
    }
    return r;
}

/// One row per entity type plus a final schema-summary row; undefined
/// metrics print as empty cells.
inline std::string to_csv(const MetricReport& r) {
    std::string out =
        "kind,id,label,n_properties,cue_er,ncue,focus_e,"
        "entity_types,properties,incidences,density,cue_cr,balance,focus_k\n";
    for (const auto& e : r.entities) {
        out += "entity," + e.id + ',' + e.label + ',' + std::to_string(e.n_properties) + ',';
        out += detail::fmt6(e.cue_er) + ',' + detail::fmt6(e.ncue) + ',' + detail::fmt6(e.focus);
        out += ",,,,,,,\n";
    }
    out += "schema," + r.schema + ",,,,,,";
    out += std::to_string(r.entity_types) + ',' + std::to_string(r.properties) + ',' +
           std::to_string(r.incidences) + ',' + detail::fmt6(r.density) + ',';
    out += (r.cue_cr ? detail::fmt6(*r.cue_cr) : "") + std::string(1, ',');
    out += (r.balance ? detail::fmt6(*r.balance) : "") + std::string(1, ',');
    out += detail::fmt6(r.focus_k) + "\n";
    return out;
}

} // namespace kbfocus
