#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "kbfocus/fca.hpp"
#include "kbfocus/prng.hpp"

using namespace kbfocus;

TEST_CASE("formal context mirrors the incidence matrix") {
    const FormalContext ctx = to_formal_context(testing::toy_abc());
    REQUIRE(ctx.objects == std::vector<std::string>{"A", "B", "C"});
    REQUIRE(ctx.attributes == std::vector<std::string>{"p1", "p2", "p3"});
    CHECK(ctx.cells == std::vector<std::uint8_t>{1, 1, 0, 0, 1, 1, 0, 0, 1});

    const FormalContext id2 = to_formal_context(testing::disjoint(2, 1));
    CHECK(id2.cells == std::vector<std::uint8_t>{1, 0, 0, 1});

    const FormalContext zero = to_formal_context(
        make_schema("z", {testing::type("A", {}), testing::type("B", {"p"})}));
    CHECK(zero.cells == std::vector<std::uint8_t>{0, 1});
}

TEST_CASE("cxt export matches the golden bytes") {
    FormalContext one;
    one.objects = {"A"};
    one.attributes = {"p1"};
    one.cells = {1};
    CHECK(export_cxt(one) == "B\n\n1\n1\n\nA\np1\nX\n");

    const std::string abc = export_cxt(to_formal_context(testing::toy_abc()));
    CHECK(abc == "B\n\n3\n3\n\nA\nB\nC\np1\np2\np3\nXX.\n.XX\n..X\n");
}

TEST_CASE("cxt round-trips") {
    SplitMix64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        FormalContext ctx;
        const std::size_t n = 1 + rng.next_below(6);
        const std::size_t m = 1 + rng.next_below(8);
        for (std::size_t i = 0; i < n; ++i) ctx.objects.push_back("o" + std::to_string(i));
        for (std::size_t j = 0; j < m; ++j) ctx.attributes.push_back("a" + std::to_string(j));
        for (std::size_t c = 0; c < n * m; ++c)
            ctx.cells.push_back(rng.next_double() < 0.5 ? 1 : 0);
        CHECK(parse_cxt(export_cxt(ctx)) == ctx);
    }
}

TEST_CASE("cxt parse errors") {
    CHECK_THROWS_AS(parse_cxt("A\n\n1\n1\n\nA\np\nX\n"), ParseError);      // bad magic
    CHECK_THROWS_AS(parse_cxt("B\n\n1\n1\n\nA\np\nXX\n"), ParseError);     // row too long
    CHECK_THROWS_AS(parse_cxt("B\n\n2\n1\n\nA\nB\np\nX\n"), ParseError);   // missing row
    CHECK_THROWS_AS(parse_cxt("B\n\nx\n1\n\nA\np\nX\n"), ParseError);      // bad count
    CHECK_THROWS_AS(parse_cxt("B\n\n1\n1\n\nA\np\n?\n"), ParseError);      // bad cell
    CHECK_THROWS_AS(parse_cxt(""), ParseError);
}

TEST_CASE("fca csv matches the canonical incidence csv") {
    const Schema s = testing::toy_abc();
    CHECK(export_fca_csv(to_formal_context(s)) == serialize_csv(s));
}
