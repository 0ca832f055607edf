#pragma once

// Shared fixtures: hand-built schemas, a random schema generator, and a
// brute-force metric oracle that enumerates the incidence matrix
// directly. The oracle deliberately shares no code path with
// MetricIndex so the two can check each other.

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <string>
#include <vector>

#include "kbfocus/metrics.hpp"
#include "kbfocus/prng.hpp"
#include "kbfocus/schema.hpp"

namespace testing {

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        static int counter = 0;
        path = std::filesystem::temp_directory_path() /
               ("kbfocus-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

inline kbfocus::EntityType type(std::string id, std::vector<std::string> props) {
    return {id, id, std::move(props)};
}

// A{p1,p2}, B{p2,p3}, C{p3}
inline kbfocus::Schema toy_abc() {
    return kbfocus::make_schema("toy", {type("A", {"p1", "p2"}),
                                        type("B", {"p2", "p3"}),
                                        type("C", {"p3"})});
}

inline kbfocus::Schema disjoint(std::size_t n_types, std::size_t props_per_type) {
    std::vector<kbfocus::EntityType> types;
    std::size_t p = 0;
    for (std::size_t t = 0; t < n_types; ++t) {
        std::vector<std::string> props;
        for (std::size_t i = 0; i < props_per_type; ++i)
            props.push_back("p" + std::to_string(p++));
        types.push_back(type("t" + std::to_string(t), std::move(props)));
    }
    return kbfocus::make_schema("disjoint", std::move(types));
}

// n entity types all owning the same m properties.
inline kbfocus::Schema fully_shared(std::size_t n_types, std::size_t m_props) {
    std::vector<std::string> props;
    for (std::size_t i = 0; i < m_props; ++i) props.push_back("p" + std::to_string(i));
    std::vector<kbfocus::EntityType> types;
    for (std::size_t t = 0; t < n_types; ++t)
        types.push_back(type("t" + std::to_string(t), props));
    return kbfocus::make_schema("shared", std::move(types));
}

// Random incidence over at most max_types x max_props; at least one
// incidence is forced so every schema has a property.
inline kbfocus::Schema random_schema(kbfocus::SplitMix64& rng, std::size_t max_types = 6,
                                     std::size_t max_props = 8) {
    const std::size_t n = 1 + rng.next_below(max_types);
    const std::size_t m = 1 + rng.next_below(max_props);
    std::vector<kbfocus::EntityType> types;
    for (std::size_t t = 0; t < n; ++t) {
        std::vector<std::string> props;
        for (std::size_t p = 0; p < m; ++p)
            if (rng.next_double() < 0.4) props.push_back("p" + std::to_string(p));
        types.push_back(type("t" + std::to_string(t), std::move(props)));
    }
    if (std::all_of(types.begin(), types.end(),
                    [](const auto& t) { return t.properties.empty(); }))
        types[0].properties.push_back("p0");
    return kbfocus::make_schema("random", std::move(types));
}

// Independent enumeration oracle over the raw incidence matrix.
class BruteForce {
public:
    explicit BruteForce(const kbfocus::Schema& s) {
        for (const auto& p : s.properties) prop_ids_.push_back(p.id);
        for (const auto& e : s.entity_types) {
            std::vector<bool> row;
            for (const auto& pid : prop_ids_)
                row.push_back(std::find(e.properties.begin(), e.properties.end(), pid) !=
                              e.properties.end());
            matrix_.push_back(std::move(row));
        }
    }

    std::size_t df(std::size_t p) const {
        std::size_t count = 0;
        for (const auto& row : matrix_)
            if (row[p]) ++count;
        return count;
    }

    double cue_er(std::size_t e) const {
        double sum = 0.0;
        for (std::size_t p = 0; p < prop_ids_.size(); ++p)
            if (matrix_[e][p]) sum += 1.0 / static_cast<double>(df(p));
        return sum;
    }

    std::size_t row_size(std::size_t e) const {
        std::size_t count = 0;
        for (bool b : matrix_[e])
            if (b) ++count;
        return count;
    }

    double ncue(std::size_t e) const {
        const std::size_t m = row_size(e);
        return m == 0 ? 0.0 : cue_er(e) / static_cast<double>(m);
    }

    double cue_cr() const {
        double num = 0.0;
        std::size_t den = 0;
        for (std::size_t e = 0; e < matrix_.size(); ++e) {
            num += cue_er(e);
            den += row_size(e);
        }
        return num / static_cast<double>(den);
    }

    std::size_t incidences() const {
        std::size_t total = 0;
        for (std::size_t e = 0; e < matrix_.size(); ++e) total += row_size(e);
        return total;
    }

    double focus_k() const {
        double sum = 0.0;
        for (std::size_t e = 0; e < matrix_.size(); ++e) sum += ncue(e);
        return sum / static_cast<double>(matrix_.size());
    }

private:
    std::vector<std::string> prop_ids_;
    std::vector<std::vector<bool>> matrix_;
};

} // namespace testing
