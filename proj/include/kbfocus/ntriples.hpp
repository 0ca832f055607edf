#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "kbfocus/errors.hpp"
#include "kbfocus/schema.hpp"
#include "kbfocus/schema_io.hpp"

namespace kbfocus {

namespace rdf {
inline constexpr std::string_view kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfProperty = "http://www.w3.org/1999/02/22-rdf-syntax-ns#Property";
inline constexpr std::string_view kRdfsClass = "http://www.w3.org/2000/01/rdf-schema#Class";
inline constexpr std::string_view kOwlClass = "http://www.w3.org/2002/07/owl#Class";
inline constexpr std::string_view kDomain = "http://www.w3.org/2000/01/rdf-schema#domain";
inline constexpr std::string_view kSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
inline constexpr std::string_view kLabel = "http://www.w3.org/2000/01/rdf-schema#label";
inline constexpr std::string_view kOwlObjectProperty = "http://www.w3.org/2002/07/owl#ObjectProperty";
inline constexpr std::string_view kOwlDatatypeProperty = "http://www.w3.org/2002/07/owl#DatatypeProperty";
inline constexpr std::string_view kOwlAnnotationProperty = "http://www.w3.org/2002/07/owl#AnnotationProperty";
} // namespace rdf

struct NtObject {
    bool is_iri = false;
    std::string value;   // IRI or literal lexical form
    std::string lang;    // language tag, if any
    std::string datatype;
};

struct NtTriple {
    std::string subject;
    std::string predicate;
    NtObject object;
};

namespace detail {

class NtLineParser {
public:
    NtLineParser(std::string_view line, std::size_t line_no) : line_(line), no_(line_no) {}

    NtTriple parse() {
        NtTriple t;
        skip_ws();
        t.subject = parse_iri("subject");
        require_ws();
        t.predicate = parse_iri("predicate");
        require_ws();
        t.object = parse_object();
        skip_ws();
        expect('.', "triple must end with '.'");
        skip_ws();
        if (pos_ != line_.size()) fail("unexpected trailing characters after '.'");
        return t;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError("line " + std::to_string(no_) + ": " + msg);
    }
    bool eof() const { return pos_ >= line_.size(); }
    char peek() const { return line_[pos_]; }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }
    void require_ws() {
        if (eof() || (peek() != ' ' && peek() != '\t')) fail("expected whitespace between terms");
        skip_ws();
    }
    void expect(char c, const std::string& msg) {
        if (eof() || peek() != c) fail(msg);
        ++pos_;
    }

    std::string parse_iri(const std::string& role) {
        if (eof() || peek() != '<') fail(role + " must be an IRI in angle brackets");
        ++pos_;
        std::string out;
        while (!eof() && peek() != '>') {
            if (peek() == ' ') fail("IRI contains an unescaped space");
            out += line_[pos_++];
        }
        expect('>', "unterminated IRI");
        if (out.empty()) fail("empty IRI");
        return out;
    }

    void append_codepoint(std::string& out, std::uint32_t cp) {
        if (cp < 0x80) {
            out += static_cast<char>(cp);
        } else if (cp < 0x800) {
            out += static_cast<char>(0xC0 | (cp >> 6));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else if (cp < 0x10000) {
            out += static_cast<char>(0xE0 | (cp >> 12));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        } else {
            out += static_cast<char>(0xF0 | (cp >> 18));
            out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
            out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
            out += static_cast<char>(0x80 | (cp & 0x3F));
        }
    }

    std::uint32_t parse_hex(int digits) {
        std::uint32_t cp = 0;
        for (int i = 0; i < digits; ++i) {
            if (eof()) fail("truncated \\u escape");
            const char c = line_[pos_++];
            cp <<= 4;
            if (c >= '0' && c <= '9') cp |= static_cast<std::uint32_t>(c - '0');
            else if (c >= 'a' && c <= 'f') cp |= static_cast<std::uint32_t>(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F') cp |= static_cast<std::uint32_t>(c - 'A' + 10);
            else fail("invalid hex digit in escape");
        }
        return cp;
    }

    std::string parse_literal_body() {
        std::string out;
        while (!eof() && peek() != '"') {
            char c = line_[pos_++];
            if (c != '\\') {
                out += c;
                continue;
            }
            if (eof()) fail("truncated escape sequence");
            const char e = line_[pos_++];
            switch (e) {
                case 't': out += '\t'; break;
                case 'b': out += '\b'; break;
                case 'n': out += '\n'; break;
                case 'r': out += '\r'; break;
                case 'f': out += '\f'; break;
                case '"': out += '"'; break;
                case '\'': out += '\''; break;
                case '\\': out += '\\'; break;
                case 'u': append_codepoint(out, parse_hex(4)); break;
                case 'U': append_codepoint(out, parse_hex(8)); break;
                default: fail(std::string("unknown escape \\") + e);
            }
        }
        expect('"', "unterminated literal");
        return out;
    }

    NtObject parse_object() {
        NtObject o;
        if (eof()) fail("missing object term");
        if (peek() == '<') {
            o.is_iri = true;
            o.value = parse_iri("object");
            return o;
        }
        if (peek() != '"') fail("object must be an IRI or a quoted literal");
        ++pos_;
        o.value = parse_literal_body();
        if (!eof() && peek() == '@') {
            ++pos_;
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-'))
                o.lang += line_[pos_++];
            if (o.lang.empty()) fail("empty language tag");
        } else if (!eof() && peek() == '^') {
            ++pos_;
            expect('^', "datatype marker must be ^^");
            o.datatype = parse_iri("datatype");
        }
        return o;
    }

    std::string_view line_;
    std::size_t no_;
    std::size_t pos_ = 0;
};

inline std::string iri_local_name(const std::string& iri) {
    const std::size_t hash = iri.rfind('#');
    std::string tail = (hash != std::string::npos) ? iri.substr(hash + 1) : std::string();
    if (tail.empty() && hash == std::string::npos) {
        const std::size_t slash = iri.rfind('/');
        if (slash != std::string::npos) tail = iri.substr(slash + 1);
    }
    return tail.empty() ? iri : tail;
}

} // namespace detail

/// Parses line-oriented N-Triples (IRI subjects/predicates, IRI or literal
/// objects, one triple per line). Blank lines and '#' comment lines are
/// skipped. Returns the triples in file order.
inline std::vector<NtTriple> parse_ntriples(std::string_view bytes) {
    std::vector<NtTriple> triples;
    const auto lines = detail::split_lines(bytes);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        std::string_view line = lines[i];
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        const std::size_t first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos || line[first] == '#') continue;
        triples.push_back(detail::NtLineParser(line, i + 1).parse());
    }
    return triples;
}

/// Extracts a schema from an N-Triples vocabulary:
///   entity types  <- subjects typed rdfs:Class or owl:Class
///   properties    <- subjects with an rdfs:domain (or typed as a property);
///                    attached to every domain that is an extracted class
///   subclass edges <- rdfs:subClassOf between extracted classes
///   labels        <- rdfs:label (smallest value when several), else the
///                    IRI local name
/// Properties without a usable domain are dropped with a warning; a file
/// with no classes is a validation error.
inline Schema parse_ntriples_vocab(std::string_view bytes, std::string_view name = "schema") {
    const auto triples = parse_ntriples(bytes);

    std::set<std::string> classes;
    std::set<std::string> property_candidates;
    std::map<std::string, std::set<std::string>> domains;
    std::map<std::string, std::set<std::string>> labels;
    std::vector<SubclassEdge> subclass_raw;

    auto is_property_type = [](const std::string& iri) {
        return iri == rdf::kRdfProperty || iri == rdf::kOwlObjectProperty ||
               iri == rdf::kOwlDatatypeProperty || iri == rdf::kOwlAnnotationProperty;
    };

    for (const auto& t : triples) {
        if (t.predicate == rdf::kType && t.object.is_iri) {
            if (t.object.value == rdf::kRdfsClass || t.object.value == rdf::kOwlClass)
                classes.insert(t.subject);
            else if (is_property_type(t.object.value))
                property_candidates.insert(t.subject);
        } else if (t.predicate == rdf::kDomain && t.object.is_iri) {
            property_candidates.insert(t.subject);
            domains[t.subject].insert(t.object.value);
        } else if (t.predicate == rdf::kSubClassOf && t.object.is_iri) {
            subclass_raw.push_back({t.subject, t.object.value});
        } else if (t.predicate == rdf::kLabel && !t.object.is_iri) {
            labels[t.subject].insert(t.object.value);
        }
    }

    if (classes.empty())
        throw ValidationError("empty schema: no rdfs:Class or owl:Class subjects in \"" +
                              std::string(name) + "\"");

    auto display = [&](const std::string& iri) {
        auto it = labels.find(iri);
        if (it != labels.end() && !it->second.empty()) return *it->second.begin();
        return detail::iri_local_name(iri);
    };

    Schema raw;
    raw.name = std::string(name);
    std::map<std::string, std::vector<std::string>> props_of;
    std::set<std::string> attached;
    for (const auto& prop : property_candidates) {
        auto dit = domains.find(prop);
        if (dit == domains.end() || dit->second.empty()) {
            raw.warnings.push_back("property <" + prop + "> dropped (no rdfs:domain)");
            continue;
        }
        bool any = false;
        for (const auto& domain : dit->second) {
            if (classes.count(domain)) {
                props_of[domain].push_back(prop);
                any = true;
            } else {
                raw.warnings.push_back("property <" + prop + "> domain <" + domain +
                                       "> is not an extracted class");
            }
        }
        if (any)
            attached.insert(prop);
        else
            raw.warnings.push_back("property <" + prop + "> dropped (no domain resolves to a class)");
    }

    for (const auto& cls : classes) {
        EntityType e;
        e.id = cls;
        e.label = display(cls);
        auto pit = props_of.find(cls);
        if (pit != props_of.end()) e.properties = pit->second;
        raw.entity_types.push_back(std::move(e));
    }
    for (const auto& prop : attached) raw.properties.push_back({prop, display(prop)});

    for (const auto& edge : subclass_raw) {
        if (classes.count(edge.child) && classes.count(edge.parent))
            raw.subclass_edges.push_back(edge);
        else
            raw.warnings.push_back("subclass edge <" + edge.child + "> -> <" + edge.parent +
                                   "> skipped (endpoint is not an extracted class)");
    }
    return validate(std::move(raw));
}

} // namespace kbfocus
