#include <catch2/catch.hpp>

#include <filesystem>
#include <fstream>

#include "helpers.hpp"
#include "kbfocus/corpus.hpp"

using namespace kbfocus;
using testing::TempDir;
namespace fs = std::filesystem;

TEST_CASE("corpus add/list keeps insertion order") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("zeta", testing::toy_abc());
    corpus.add("alpha", testing::disjoint(2, 1));
    const auto entries = corpus.list();
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].name == "zeta");
    CHECK(entries[1].name == "alpha");
}

TEST_CASE("corpus load round-trips the schema") {
    TempDir dir;
    Corpus corpus(dir.path);
    Schema s = testing::toy_abc();
    corpus.add("toy", s);
    const Schema back = corpus.load("toy");
    CHECK(back == s);
}

TEST_CASE("adding the same name twice collides") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("toy", testing::toy_abc());
    CHECK_THROWS_AS(corpus.add("toy", testing::toy_abc()), ValidationError);
}

TEST_CASE("modified schema bytes fail the hash check") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("toy", testing::toy_abc());
    {
        std::ofstream out(dir.path / "schemas" / "toy.json", std::ios::app);
        out << "\n";
    }
    try {
        corpus.load("toy");
        FAIL("expected stale-manifest error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("stale manifest") != std::string::npos);
    }
}

TEST_CASE("unknown names and bad names are rejected") {
    TempDir dir;
    Corpus corpus(dir.path);
    CHECK_THROWS_AS(corpus.load("nope"), LookupError);
    CHECK_THROWS_AS(corpus.add("a/b", testing::toy_abc()), ValidationError);
    CHECK_THROWS_AS(corpus.add("", testing::toy_abc()), ValidationError);
}

TEST_CASE("cached_report computes once and rereads the cache") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("toy", testing::toy_abc());
    const MetricReport first = corpus.cached_report("toy");
    CHECK(fs::exists(dir.path / "cache"));
    std::size_t cache_files = 0;
    for (const auto& e : fs::directory_iterator(dir.path / "cache")) {
        ++cache_files;
        CHECK(e.path().filename().string().find(".v" + std::string(kMetricSuiteVersion) + ".") !=
              std::string::npos);
    }
    CHECK(cache_files == 1);
    const MetricReport second = corpus.cached_report("toy");
    CHECK(to_json(second) == to_json(first));
    CHECK(first.focus_k == Approx(0.5833333333).epsilon(1e-9));
}

TEST_CASE("cached_report refuses stale file content even with a warm cache") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("toy", testing::toy_abc());
    corpus.cached_report("toy"); // warm the cache
    {
        std::ofstream out(dir.path / "schemas" / "toy.json", std::ios::app);
        out << "\n";
    }
    CHECK_THROWS_AS(corpus.cached_report("toy"), ValidationError);
}

TEST_CASE("inherit and flat reports cache separately") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("ch", make_schema("ch", {testing::type("A", {"p1"}), testing::type("B", {"p2"})},
                                 {{"B", "A"}}));
    const MetricReport flat = corpus.cached_report("ch", false);
    const MetricReport inh = corpus.cached_report("ch", true);
    CHECK(flat.incidences == 2);
    CHECK(inh.incidences == 3);
}

TEST_CASE("load_all returns schemas sorted by name") {
    TempDir dir;
    Corpus corpus(dir.path);
    corpus.add("zeta", testing::toy_abc());
    corpus.add("alpha", testing::disjoint(2, 1));
    const auto all = corpus.load_all();
    REQUIRE(all.size() == 2);
    CHECK(all[0].name == "alpha");
    CHECK(all[1].name == "zeta");
}
