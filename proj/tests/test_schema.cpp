#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "kbfocus/schema.hpp"
#include "kbfocus/schema_io.hpp"

using namespace kbfocus;

TEST_CASE("canonical JSON parses into a normalized schema") {
    const std::string doc = R"({
      "name": "toy",
      "entity_types": [
        {"id": "C", "properties": ["p3"]},
        {"id": "A", "label": "Alpha", "properties": ["p2", "p1"]},
        {"id": "B", "properties": ["p2", "p3"]}
      ]
    })";
    const Schema s = parse_canonical_json(doc);
    REQUIRE(s.entity_types.size() == 3);
    REQUIRE(s.properties.size() == 3);
    CHECK(s.entity_types[0].id == "A");
    CHECK(s.entity_types[0].label == "Alpha");
    CHECK(s.entity_types[0].properties == std::vector<std::string>{"p1", "p2"});
    CHECK(s.entity_types[2].id == "C");
    CHECK(s.name == "toy");
}

TEST_CASE("JSON round-trip preserves the schema") {
    const Schema s = make_schema(
        "rt",
        {testing::type("A", {"p1", "p2"}), testing::type("B", {"p2"}),
         {"C", "Gamma", {"p1"}}},
        {{"B", "A"}, {"C", "A"}});
    CHECK(parse_canonical_json(serialize_json(s)) == s);
}

TEST_CASE("CSV incidence parses and drops all-zero columns") {
    const std::string csv = ",p1,p2,dead\nA,1,1,0\nB,0,1,0\n";
    const Schema s = parse_canonical_csv(csv, "m");
    CHECK(s.properties.size() == 2);
    CHECK(s.entity_types.size() == 2);
    REQUIRE_FALSE(s.warnings.empty());
    CHECK(s.warnings[0].find("dead") != std::string::npos);
}

TEST_CASE("CSV round-trip over incidence") {
    const Schema s = testing::toy_abc();
    const Schema back = parse_canonical_csv(serialize_csv(s), "toy");
    CHECK(back == s);
}

TEST_CASE("CSV rejects bad cells and ragged rows") {
    CHECK_THROWS_AS(parse_canonical_csv(",p1\nA,2\n"), ParseError);
    CHECK_THROWS_AS(parse_canonical_csv(",p1,p2\nA,1\n"), ParseError);
    CHECK_THROWS_AS(parse_canonical_csv("", "x"), ParseError);
}

TEST_CASE("cyclic subclass edges are rejected") {
    const std::string doc = R"({
      "name": "c",
      "entity_types": [{"id": "A", "properties": ["p"]}, {"id": "B", "properties": ["p"]}],
      "subclass_of": [["A", "B"], ["B", "A"]]
    })";
    CHECK_THROWS_MATCHES(parse_canonical_json(doc), ValidationError,
                         Catch::Matchers::Message("subclass edges form a cycle (at \"A\")"));
    CHECK_THROWS_AS(make_schema("self", {testing::type("A", {"p"})}, {{"A", "A"}}),
                    ValidationError);
}

TEST_CASE("validation rejects duplicates and dangling references") {
    CHECK_THROWS_AS(make_schema("d", {testing::type("A", {"p"}), testing::type("A", {"q"})}),
                    ValidationError);
    CHECK_THROWS_AS(make_schema("e", {testing::type("A", {"p"})}, {{"A", "Missing"}}),
                    ValidationError);
    CHECK_THROWS_AS(make_schema("f", {}), ValidationError);
    CHECK_THROWS_AS(parse_canonical_csv(",p1,p1\nA,1,1\n"), ValidationError);
}

TEST_CASE("empty property sets are allowed but flagged") {
    const Schema s = make_schema("w", {testing::type("A", {}), testing::type("B", {"p"})});
    REQUIRE(s.entity_types.size() == 2);
    CHECK(std::any_of(s.warnings.begin(), s.warnings.end(), [](const std::string& w) {
        return w.find("\"A\" has no properties") != std::string::npos;
    }));
}

TEST_CASE("schema_stats counts sizes, incidences and density") {
    const SchemaStats abc = schema_stats(testing::toy_abc());
    CHECK(abc.entity_types == 3);
    CHECK(abc.properties == 3);
    CHECK(abc.incidences == 5);
    CHECK(abc.density == Approx(5.0 / 9.0));

    const SchemaStats one = schema_stats(make_schema("one", {testing::type("A", {"p"})}));
    CHECK(one.entity_types == 1);
    CHECK(one.properties == 1);
    CHECK(one.incidences == 1);
    CHECK(one.density == 1.0);

    const SchemaStats two = schema_stats(testing::disjoint(2, 1));
    CHECK(two.entity_types == 2);
    CHECK(two.properties == 2);
    CHECK(two.incidences == 2);
    CHECK(two.density == 0.5);
}

TEST_CASE("parse is order independent") {
    const std::string a = R"({"name":"o","entity_types":[
        {"id":"X","properties":["p","q"]},{"id":"Y","properties":["q"]}]})";
    const std::string b = R"({"name":"o","entity_types":[
        {"id":"Y","properties":["q"]},{"id":"X","properties":["q","p"]}]})";
    CHECK(parse_canonical_json(a) == parse_canonical_json(b));
}

TEST_CASE("inherit_properties unions ancestor properties") {
    SECTION("chain") {
        const Schema s = make_schema(
            "ch", {testing::type("A", {"p1"}), testing::type("B", {"p2"})}, {{"B", "A"}});
        const Schema inherited = inherit_properties(s);
        CHECK(inherited.find_entity("B")->properties == std::vector<std::string>{"p1", "p2"});
        CHECK(inherited.find_entity("A")->properties == std::vector<std::string>{"p1"});
    }
    SECTION("no edges is the identity") {
        const Schema s = testing::toy_abc();
        CHECK(inherit_properties(s) == s);
    }
    SECTION("diamond unions once") {
        const Schema s = make_schema("di",
                                     {testing::type("top", {"t"}), testing::type("l", {"pl"}),
                                      testing::type("r", {"pr"}), testing::type("bot", {"pb"})},
                                     {{"l", "top"}, {"r", "top"}, {"bot", "l"}, {"bot", "r"}});
        const Schema inherited = inherit_properties(s);
        CHECK(inherited.find_entity("bot")->properties ==
              std::vector<std::string>{"pb", "pl", "pr", "t"});
    }
    SECTION("idempotent and monotone on random DAGs") {
        SplitMix64 rng(7);
        for (int trial = 0; trial < 50; ++trial) {
            Schema s = testing::random_schema(rng);
            // edges from a higher id to a lower id can never cycle
            std::vector<SubclassEdge> edges;
            for (std::size_t i = 1; i < s.entity_types.size(); ++i)
                if (rng.next_double() < 0.5)
                    edges.push_back({s.entity_types[i].id,
                                     s.entity_types[rng.next_below(i)].id});
            s = make_schema(s.name, s.entity_types, edges);
            const Schema once = inherit_properties(s);
            CHECK(inherit_properties(once) == once);
            for (std::size_t i = 0; i < s.entity_types.size(); ++i) {
                const auto& before = s.entity_types[i].properties;
                const auto& after = once.entity_types[i].properties;
                CHECK(std::includes(after.begin(), after.end(), before.begin(), before.end()));
            }
        }
    }
}

TEST_CASE("random schemas survive a JSON round-trip") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Schema s = testing::random_schema(rng);
        CHECK(parse_canonical_json(serialize_json(s)) == s);
    }
}

TEST_CASE("parse_canonical sniffs the format") {
    CHECK(parse_canonical(R"({"name":"j","entity_types":[{"id":"A","properties":["p"]}]})")
              .name == "j");
    CHECK(parse_canonical(",p1\nA,1\n", "c").properties.size() == 1);
}
