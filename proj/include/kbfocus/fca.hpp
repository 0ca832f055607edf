#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kbfocus/errors.hpp"
#include "kbfocus/schema.hpp"
#include "kbfocus/schema_io.hpp"

namespace kbfocus {

/// Binary objects-by-attributes incidence matrix. Objects are entity-type
/// ids and attributes property ids, both in sorted-id order.
struct FormalContext {
    std::vector<std::string> objects;
    std::vector<std::string> attributes;
    std::vector<std::uint8_t> cells; // row-major, objects x attributes

    bool at(std::size_t object, std::size_t attribute) const {
        return cells[object * attributes.size() + attribute] != 0;
    }

    friend bool operator==(const FormalContext&, const FormalContext&) = default;
};

inline FormalContext to_formal_context(const Schema& schema) {
    FormalContext ctx;
    for (const auto& e : schema.entity_types) ctx.objects.push_back(e.id);
    for (const auto& p : schema.properties) ctx.attributes.push_back(p.id);
    ctx.cells.assign(ctx.objects.size() * ctx.attributes.size(), 0);
    for (std::size_t i = 0; i < schema.entity_types.size(); ++i) {
        const auto& props = schema.entity_types[i].properties;
        for (std::size_t j = 0; j < ctx.attributes.size(); ++j)
            if (std::binary_search(props.begin(), props.end(), ctx.attributes[j]))
                ctx.cells[i * ctx.attributes.size() + j] = 1;
    }
    return ctx;
}

/// Burmeister interchange format, LF line endings:
///   B, blank, object count, attribute count, blank, object names,
///   attribute names, then one X/. row per object.
inline std::string export_cxt(const FormalContext& ctx) {
    std::string out = "B\n\n";
    out += std::to_string(ctx.objects.size()) + "\n";
    out += std::to_string(ctx.attributes.size()) + "\n\n";
    for (const auto& g : ctx.objects) out += g + "\n";
    for (const auto& m : ctx.attributes) out += m + "\n";
    for (std::size_t i = 0; i < ctx.objects.size(); ++i) {
        for (std::size_t j = 0; j < ctx.attributes.size(); ++j)
            out += ctx.at(i, j) ? 'X' : '.';
        out += '\n';
    }
    return out;
}

inline FormalContext parse_cxt(std::string_view bytes) {
    auto lines = detail::split_lines(bytes);
    for (auto& line : lines)
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::size_t at = 0;
    auto next = [&]() -> std::string_view {
        if (at >= lines.size()) throw ParseError("truncated .cxt input");
        return lines[at++];
    };
    if (next() != "B") throw ParseError(".cxt must start with a 'B' line");
    if (!next().empty()) throw ParseError("expected blank line after 'B'");

    auto parse_count = [&](const char* what) {
        const std::string_view line = next();
        std::size_t value = 0;
        if (line.empty()) throw ParseError(std::string("missing ") + what + " count");
        for (char c : line) {
            if (c < '0' || c > '9')
                throw ParseError(std::string("invalid ") + what + " count \"" + std::string(line) + "\"");
            value = value * 10 + static_cast<std::size_t>(c - '0');
        }
        return value;
    };
    const std::size_t n_objects = parse_count("object");
    const std::size_t n_attributes = parse_count("attribute");
    if (!next().empty()) throw ParseError("expected blank line before names");

    FormalContext ctx;
    for (std::size_t i = 0; i < n_objects; ++i) ctx.objects.emplace_back(next());
    for (std::size_t j = 0; j < n_attributes; ++j) ctx.attributes.emplace_back(next());
    ctx.cells.assign(n_objects * n_attributes, 0);
    for (std::size_t i = 0; i < n_objects; ++i) {
        const std::string_view row = next();
        if (row.size() != n_attributes)
            throw ParseError("row " + std::to_string(i + 1) + " has " +
                             std::to_string(row.size()) + " cells, expected " +
                             std::to_string(n_attributes));
        for (std::size_t j = 0; j < n_attributes; ++j) {
            if (row[j] == 'X')
                ctx.cells[i * n_attributes + j] = 1;
            else if (row[j] != '.')
                throw ParseError("row " + std::to_string(i + 1) +
                                 " contains an invalid cell character");
        }
    }
    while (at < lines.size()) {
        if (!lines[at].empty()) throw ParseError("unexpected content after incidence rows");
        ++at;
    }
    return ctx;
}

/// Incidence CSV of the context; same layout as the canonical schema CSV.
inline std::string export_fca_csv(const FormalContext& ctx) {
    std::string out;
    for (const auto& m : ctx.attributes) {
        out += ',';
        out += m;
    }
    out += '\n';
    for (std::size_t i = 0; i < ctx.objects.size(); ++i) {
        out += ctx.objects[i];
        for (std::size_t j = 0; j < ctx.attributes.size(); ++j)
            out += ctx.at(i, j) ? ",1" : ",0";
        out += '\n';
    }
    return out;
}

} // namespace kbfocus
