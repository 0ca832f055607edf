#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kbfocus/errors.hpp"
#include "kbfocus/schema.hpp"

namespace kbfocus {

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        std::string_view cell = (comma == std::string_view::npos)
                                    ? line.substr(start)
                                    : line.substr(start, comma - start);
        while (!cell.empty() && (cell.front() == ' ' || cell.front() == '\t')) cell.remove_prefix(1);
        while (!cell.empty() && (cell.back() == ' ' || cell.back() == '\t' || cell.back() == '\r'))
            cell.remove_suffix(1);
        cells.emplace_back(cell);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return cells;
}

inline std::vector<std::string_view> split_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

} // namespace detail

/// Parses the canonical JSON form:
///   {"name": str,
///    "entity_types": [{"id": str, "label": str?, "properties": [str]}],
///    "subclass_of": [[child, parent]]?}
inline Schema parse_canonical_json(std::string_view bytes, std::string_view default_name = "schema") {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("canonical JSON root must be an object");

    Schema raw;
    raw.name = doc.contains("name") ? doc.at("name").get<std::string>() : std::string(default_name);
    if (!doc.contains("entity_types") || !doc.at("entity_types").is_array())
        throw ParseError("canonical JSON requires an \"entity_types\" array");
    try {
        for (const auto& t : doc.at("entity_types")) {
            EntityType e;
            e.id = t.at("id").get<std::string>();
            e.label = t.contains("label") ? t.at("label").get<std::string>() : e.id;
            if (t.contains("properties"))
                for (const auto& p : t.at("properties")) e.properties.push_back(p.get<std::string>());
            raw.entity_types.push_back(std::move(e));
        }
        if (doc.contains("subclass_of"))
            for (const auto& pair : doc.at("subclass_of")) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError("subclass_of entries must be [child, parent] pairs");
                raw.subclass_edges.push_back({pair.at(0).get<std::string>(), pair.at(1).get<std::string>()});
            }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed canonical JSON: ") + e.what());
    }
    return validate(std::move(raw));
}

/// Parses the incidence CSV form: first row lists property ids (the first
/// cell is ignored), each following row is an entity-type id and 1/0 cells.
inline Schema parse_canonical_csv(std::string_view bytes, std::string_view name = "schema") {
    const auto lines = detail::split_lines(bytes);
    std::size_t header_at = 0;
    while (header_at < lines.size() &&
           lines[header_at].find_first_not_of(" \t\r") == std::string_view::npos)
        ++header_at;
    if (header_at >= lines.size()) throw ParseError("CSV incidence matrix is empty");

    const auto header = detail::split_csv_line(lines[header_at]);
    if (header.size() < 2) throw ParseError("CSV header must list at least one property id");
    std::vector<std::string> property_ids(header.begin() + 1, header.end());

    Schema raw;
    raw.name = std::string(name);
    for (const auto& pid : property_ids) {
        if (pid.empty()) throw ParseError("CSV header contains an empty property id");
        raw.properties.push_back({pid, pid});
    }

    for (std::size_t i = header_at + 1; i < lines.size(); ++i) {
        if (lines[i].find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const auto cells = detail::split_csv_line(lines[i]);
        if (cells.size() != header.size())
            throw ParseError("CSV row " + std::to_string(i + 1) + " has " +
                             std::to_string(cells.size()) + " cells, expected " +
                             std::to_string(header.size()));
        EntityType e;
        e.id = cells[0];
        e.label = e.id;
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (cells[c] == "1")
                e.properties.push_back(property_ids[c - 1]);
            else if (cells[c] != "0")
                throw ParseError("CSV row " + std::to_string(i + 1) + " cell " +
                                 std::to_string(c + 1) + " must be 0 or 1, got \"" + cells[c] + "\"");
        }
        raw.entity_types.push_back(std::move(e));
    }
    return validate(std::move(raw));
}

/// Parses canonical bytes, sniffing JSON ('{' first) vs CSV.
inline Schema parse_canonical(std::string_view bytes, std::string_view default_name = "schema") {
    const std::size_t first = bytes.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && bytes[first] == '{')
        return parse_canonical_json(bytes, default_name);
    return parse_canonical_csv(bytes, default_name);
}

/// Canonical JSON serialization; parse_canonical_json(serialize_json(S)) == S.
/// Labels equal to the id and empty edge lists are omitted.
inline std::string serialize_json(const Schema& schema) {
    nlohmann::json doc;
    doc["name"] = schema.name;
    doc["entity_types"] = nlohmann::json::array();
    for (const auto& e : schema.entity_types) {
        nlohmann::json t;
        t["id"] = e.id;
        if (e.label != e.id) t["label"] = e.label;
        t["properties"] = e.properties;
        doc["entity_types"].push_back(std::move(t));
    }
    if (!schema.subclass_edges.empty()) {
        doc["subclass_of"] = nlohmann::json::array();
        for (const auto& edge : schema.subclass_edges)
            doc["subclass_of"].push_back({edge.child, edge.parent});
    }
    return doc.dump(2) + "\n";
}

/// Incidence CSV serialization (labels and subclass edges are not carried).
inline std::string serialize_csv(const Schema& schema) {
    std::string out;
    for (const auto& p : schema.properties) {
        out += ',';
        out += p.id;
    }
    out += '\n';
    for (const auto& e : schema.entity_types) {
        out += e.id;
        for (const auto& p : schema.properties) {
            const bool has = std::binary_search(e.properties.begin(), e.properties.end(), p.id);
            out += has ? ",1" : ",0";
        }
        out += '\n';
    }
    return out;
}

} // namespace kbfocus
