#include <catch2/catch.hpp>

#include <algorithm>

#include "kbfocus/ntriples.hpp"

using namespace kbfocus;

namespace {
const std::string kPrefix = "http://example.org/ns#";
std::string iri(const std::string& local) { return "<" + kPrefix + local + ">"; }
const std::string kTypePred = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";
const std::string kClass = "<http://www.w3.org/2000/01/rdf-schema#Class>";
const std::string kOwlClass = "<http://www.w3.org/2002/07/owl#Class>";
const std::string kDomainPred = "<http://www.w3.org/2000/01/rdf-schema#domain>";
const std::string kLabelPred = "<http://www.w3.org/2000/01/rdf-schema#label>";
const std::string kSubClassPred = "<http://www.w3.org/2000/01/rdf-schema#subClassOf>";
} // namespace

TEST_CASE("class with a domain-attached property") {
    const std::string nt = iri("Person") + " " + kTypePred + " " + kClass + " .\n" +
                           iri("name") + " " + kDomainPred + " " + iri("Person") + " .\n";
    const Schema s = parse_ntriples_vocab(nt, "v");
    REQUIRE(s.entity_types.size() == 1);
    CHECK(s.entity_types[0].label == "Person");
    REQUIRE(s.entity_types[0].properties.size() == 1);
    CHECK(s.entity_types[0].properties[0] == kPrefix + "name");
    CHECK(s.properties[0].label == "name");
}

TEST_CASE("property without a domain is dropped with a warning") {
    const std::string nt =
        iri("Person") + " " + kTypePred + " " + kClass + " .\n" + iri("orphan") + " " +
        kTypePred + " <http://www.w3.org/1999/02/22-rdf-syntax-ns#Property> .\n";
    const Schema s = parse_ntriples_vocab(nt, "v");
    CHECK(s.properties.empty());
    CHECK(std::any_of(s.warnings.begin(), s.warnings.end(), [](const std::string& w) {
        return w.find("orphan") != std::string::npos && w.find("no rdfs:domain") != std::string::npos;
    }));
}

TEST_CASE("labels come from rdfs:label, smallest value winning") {
    const std::string nt = iri("Printer") + " " + kTypePred + " " + kOwlClass + " .\n" +
                           iri("Printer") + " " + kLabelPred + " \"Printer\"@en .\n";
    const Schema s = parse_ntriples_vocab(nt, "v");
    CHECK(s.entity_types[0].label == "Printer");

    const std::string two = iri("X") + " " + kTypePred + " " + kClass + " .\n" + iri("X") + " " +
                            kLabelPred + " \"Zeta\" .\n" + iri("X") + " " + kLabelPred +
                            " \"Alpha\" .\n";
    CHECK(parse_ntriples_vocab(two, "v").entity_types[0].label == "Alpha");
}

TEST_CASE("label falls back to the IRI local name") {
    const std::string nt = "<http://example.org/path/Widget> " + kTypePred + " " + kClass + " .\n";
    CHECK(parse_ntriples_vocab(nt, "v").entity_types[0].label == "Widget");
}

TEST_CASE("subclass edges between extracted classes only") {
    const std::string nt = iri("Dog") + " " + kTypePred + " " + kClass + " .\n" + iri("Animal") +
                           " " + kTypePred + " " + kClass + " .\n" + iri("Dog") + " " +
                           kSubClassPred + " " + iri("Animal") + " .\n" + iri("Dog") + " " +
                           kSubClassPred + " " + iri("Thing") + " .\n";
    const Schema s = parse_ntriples_vocab(nt, "v");
    REQUIRE(s.subclass_edges.size() == 1);
    CHECK(s.subclass_edges[0].child == kPrefix + "Dog");
    CHECK(s.subclass_edges[0].parent == kPrefix + "Animal");
    CHECK(std::any_of(s.warnings.begin(), s.warnings.end(), [](const std::string& w) {
        return w.find("Thing") != std::string::npos;
    }));
}

TEST_CASE("a property with several domains attaches to each class") {
    const std::string nt = iri("A") + " " + kTypePred + " " + kClass + " .\n" + iri("B") + " " +
                           kTypePred + " " + kClass + " .\n" + iri("shared") + " " + kDomainPred +
                           " " + iri("A") + " .\n" + iri("shared") + " " + kDomainPred + " " +
                           iri("B") + " .\n";
    const Schema s = parse_ntriples_vocab(nt, "v");
    CHECK(s.entity_types[0].properties.size() == 1);
    CHECK(s.entity_types[1].properties.size() == 1);
    CHECK(s.properties.size() == 1);
}

TEST_CASE("malformed lines report their line number") {
    const std::string nt = iri("A") + " " + kTypePred + " " + kClass + " .\n" +
                           "not a triple\n";
    try {
        parse_ntriples_vocab(nt, "v");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_ntriples("<http://a> <http://b> \"unterminated .\n"), ParseError);
    CHECK_THROWS_AS(parse_ntriples("<http://a> <http://b> <http://c>\n"), ParseError);
}

TEST_CASE("no classes means an empty schema error") {
    const std::string nt = iri("p") + " " + kDomainPred + " " + iri("A") + " .\n";
    CHECK_THROWS_AS(parse_ntriples_vocab(nt, "v"), ValidationError);
}

TEST_CASE("comments, blank lines and CRLF are tolerated") {
    const std::string nt = "# a comment\r\n\r\n" + iri("A") + " " + kTypePred + " " + kClass +
                           " .\r\n";
    CHECK(parse_ntriples_vocab(nt, "v").entity_types.size() == 1);
}

TEST_CASE("literal escapes decode") {
    const std::string nt = iri("A") + " " + kTypePred + " " + kClass + " .\n" + iri("A") + " " +
                           kLabelPred + " \"\\u0041lpha \\\"x\\\"\" .\n";
    CHECK(parse_ntriples_vocab(nt, "v").entity_types[0].label == "Alpha \"x\"");
}

TEST_CASE("permuting triple lines yields an equal schema") {
    std::vector<std::string> lines{
        iri("B") + " " + kTypePred + " " + kClass + " .",
        iri("A") + " " + kTypePred + " " + kClass + " .",
        iri("p") + " " + kDomainPred + " " + iri("A") + " .",
        iri("A") + " " + kLabelPred + " \"Zed\" .",
        iri("A") + " " + kLabelPred + " \"Ann\" .",
        iri("B") + " " + kSubClassPred + " " + iri("A") + " .",
    };
    std::string forward, backward;
    for (const auto& l : lines) forward += l + "\n";
    for (auto it = lines.rbegin(); it != lines.rend(); ++it) backward += *it + "\n";
    CHECK(parse_ntriples_vocab(forward, "v") == parse_ntriples_vocab(backward, "v"));
    CHECK(parse_ntriples_vocab(forward, "v").entity_types[0].label == "Ann");
}

TEST_CASE("typed literals parse") {
    const auto triples = parse_ntriples(
        "<http://a> <http://b> \"5\"^^<http://www.w3.org/2001/XMLSchema#integer> .\n");
    REQUIRE(triples.size() == 1);
    CHECK(triples[0].object.value == "5");
    CHECK(triples[0].object.datatype == "http://www.w3.org/2001/XMLSchema#integer");
}
