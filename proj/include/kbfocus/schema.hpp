#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kbfocus/errors.hpp"

namespace kbfocus {

/// A property usable to describe instances of an entity type.
struct Property {
    std::string id;
    std::string label; // display form, defaults to id

    friend bool operator==(const Property&, const Property&) = default;
};

/// A class/category in a schema, described by the properties it carries.
struct EntityType {
    std::string id;
    std::string label;
    std::vector<std::string> properties; // sorted, unique property ids

    friend bool operator==(const EntityType&, const EntityType&) = default;
};

struct SubclassEdge {
    std::string child;
    std::string parent;

    friend bool operator==(const SubclassEdge&, const SubclassEdge&) = default;
    friend bool operator<(const SubclassEdge& a, const SubclassEdge& b) {
        return std::tie(a.child, a.parent) < std::tie(b.child, b.parent);
    }
};

/// A knowledge base schema: a set of entity types, each with a set of
/// properties, optionally related by subclass edges.
///
/// A validated Schema is normalized: entity types and properties are
/// sorted by id (byte-wise), per-type property lists are sorted and
/// deduplicated, and subclass edges form a DAG. All library operations
/// require a validated schema; use validate() or one of the parsers.
struct Schema {
    std::string name;
    std::vector<EntityType> entity_types;
    std::vector<Property> properties;
    std::vector<SubclassEdge> subclass_edges;
    std::vector<std::string> warnings; // advisory, not part of identity

    friend bool operator==(const Schema& a, const Schema& b) {
        return a.name == b.name && a.entity_types == b.entity_types &&
               a.properties == b.properties && a.subclass_edges == b.subclass_edges;
    }

    const EntityType* find_entity(std::string_view id) const {
        auto it = std::lower_bound(entity_types.begin(), entity_types.end(), id,
                                   [](const EntityType& e, std::string_view v) { return e.id < v; });
        if (it == entity_types.end() || it->id != id) return nullptr;
        return &*it;
    }

    bool has_property(std::string_view id) const {
        auto it = std::lower_bound(properties.begin(), properties.end(), id,
                                   [](const Property& p, std::string_view v) { return p.id < v; });
        return it != properties.end() && it->id == id;
    }
};

struct SchemaStats {
    std::size_t entity_types = 0;
    std::size_t properties = 0;
    std::size_t incidences = 0;
    double density = 0.0; // incidences / (|E|*|P|), 0 when the grid is empty
};

namespace detail {

inline void throw_cycle(const std::string& at) {
    throw ValidationError("subclass edges form a cycle (at \"" + at + "\")");
}

// DFS three-color cycle check over child -> parent edges.
inline void check_dag(const std::vector<EntityType>& types,
                      const std::vector<SubclassEdge>& edges) {
    std::unordered_map<std::string, std::vector<const std::string*>> parents;
    for (const auto& e : edges) parents[e.child].push_back(&e.parent);
    std::unordered_map<std::string, int> color; // 0 white, 1 grey, 2 black
    for (const auto& t : types) color[t.id] = 0;

    struct Frame {
        const std::string* node;
        std::size_t next = 0;
    };
    for (const auto& t : types) {
        if (color[t.id] != 0) continue;
        std::vector<Frame> stack{{&t.id}};
        color[t.id] = 1;
        static const std::vector<const std::string*> no_parents;
        while (!stack.empty()) {
            Frame& f = stack.back();
            auto it = parents.find(*f.node);
            const auto& out = (it == parents.end()) ? no_parents : it->second;
            if (f.next < out.size()) {
                const std::string* nxt = out[f.next++];
                int& c = color[*nxt];
                if (c == 1) throw_cycle(*nxt);
                if (c == 0) {
                    c = 1;
                    stack.push_back({nxt});
                }
            } else {
                color[*f.node] = 2;
                stack.pop_back();
            }
        }
    }
}

} // namespace detail

/// Normalizes and checks a raw schema. Returns the validated schema with
/// any warnings (orphan properties, empty property sets) attached.
///
/// Rules: entity ids non-empty and unique; property references resolve
/// against the declared property list when one is present (otherwise the
/// list is derived from the references); subclass edges resolve and form
/// a DAG; properties referenced by no entity type are dropped with a
/// warning. Order of the input does not affect the result.
inline Schema validate(Schema raw) {
    if (raw.entity_types.empty())
        throw ValidationError("schema \"" + raw.name + "\" has no entity types");

    std::set<std::string> seen_ids;
    for (auto& e : raw.entity_types) {
        if (e.id.empty()) throw ValidationError("entity type with empty id");
        if (!seen_ids.insert(e.id).second)
            throw ValidationError("duplicate entity type id \"" + e.id + "\"");
        if (e.label.empty()) e.label = e.id;
        std::sort(e.properties.begin(), e.properties.end());
        e.properties.erase(std::unique(e.properties.begin(), e.properties.end()),
                           e.properties.end());
        for (const auto& p : e.properties)
            if (p.empty()) throw ValidationError("empty property id on \"" + e.id + "\"");
    }
    std::sort(raw.entity_types.begin(), raw.entity_types.end(),
              [](const EntityType& a, const EntityType& b) { return a.id < b.id; });

    // Referenced property ids; the declared list may add labels or orphans.
    std::set<std::string> referenced;
    for (const auto& e : raw.entity_types)
        referenced.insert(e.properties.begin(), e.properties.end());

    std::map<std::string, std::string> labels;
    for (const auto& p : raw.properties) {
        if (p.id.empty()) throw ValidationError("property with empty id");
        auto [it, fresh] = labels.emplace(p.id, p.label.empty() ? p.id : p.label);
        if (!fresh) throw ValidationError("duplicate property id \"" + p.id + "\"");
    }
    if (!raw.properties.empty()) {
        for (const auto& r : referenced)
            if (!labels.count(r))
                throw ValidationError("unresolved property reference \"" + r + "\"");
        for (const auto& [id, label] : labels) {
            if (!referenced.count(id)) {
                raw.warnings.push_back("orphan property \"" + id + "\" dropped (no entity type references it)");
                (void)label;
            }
        }
    }

    Schema out;
    out.name = std::move(raw.name);
    out.entity_types = std::move(raw.entity_types);
    out.warnings = std::move(raw.warnings);
    for (const auto& r : referenced) {
        auto it = labels.find(r);
        out.properties.push_back({r, it == labels.end() ? r : it->second});
    }

    for (const auto& e : out.entity_types)
        if (e.properties.empty())
            out.warnings.push_back("entity type \"" + e.id + "\" has no properties");

    std::sort(raw.subclass_edges.begin(), raw.subclass_edges.end());
    raw.subclass_edges.erase(std::unique(raw.subclass_edges.begin(), raw.subclass_edges.end()),
                             raw.subclass_edges.end());
    for (const auto& edge : raw.subclass_edges) {
        if (!out.find_entity(edge.child))
            throw ValidationError("subclass edge child \"" + edge.child + "\" is not an entity type");
        if (!out.find_entity(edge.parent))
            throw ValidationError("subclass edge parent \"" + edge.parent + "\" is not an entity type");
    }
    detail::check_dag(out.entity_types, raw.subclass_edges);
    out.subclass_edges = std::move(raw.subclass_edges);
    return out;
}

/// Convenience constructor for programmatic schemas: validates on the way in.
inline Schema make_schema(std::string name,
                          std::vector<EntityType> types,
                          std::vector<SubclassEdge> edges = {}) {
    Schema raw;
    raw.name = std::move(name);
    raw.entity_types = std::move(types);
    raw.subclass_edges = std::move(edges);
    return validate(std::move(raw));
}

inline SchemaStats schema_stats(const Schema& schema) {
    SchemaStats s;
    s.entity_types = schema.entity_types.size();
    s.properties = schema.properties.size();
    for (const auto& e : schema.entity_types) s.incidences += e.properties.size();
    const double grid = static_cast<double>(s.entity_types) * static_cast<double>(s.properties);
    s.density = grid > 0.0 ? static_cast<double>(s.incidences) / grid : 0.0;
    return s;
}

/// Unions every entity type's property set with all of its ancestors'.
/// Idempotent; property sets only grow. Requires a validated schema.
inline Schema inherit_properties(const Schema& schema) {
    std::unordered_map<std::string, std::vector<std::string>> parents;
    for (const auto& e : schema.subclass_edges) parents[e.child].push_back(e.parent);

    std::unordered_map<std::string, std::set<std::string>> closed;
    // Types are processed on demand; the DAG invariant bounds the recursion.
    auto close = [&](auto&& self, const std::string& id) -> const std::set<std::string>& {
        auto it = closed.find(id);
        if (it != closed.end()) return it->second;
        const EntityType* e = schema.find_entity(id);
        std::set<std::string> acc(e->properties.begin(), e->properties.end());
        auto pit = parents.find(id);
        if (pit != parents.end())
            for (const auto& parent : pit->second) {
                const auto& up = self(self, parent);
                acc.insert(up.begin(), up.end());
            }
        return closed.emplace(id, std::move(acc)).first->second;
    };

    Schema out = schema;
    out.warnings.clear();
    for (auto& e : out.entity_types) {
        const auto& acc = close(close, e.id);
        e.properties.assign(acc.begin(), acc.end());
    }
    return validate(std::move(out));
}

} // namespace kbfocus
