#pragma once

#include <cctype>
#include <cmath>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "kbfocus/metrics.hpp"
#include "kbfocus/ranked_list.hpp"
#include "kbfocus/schema.hpp"

namespace kbfocus {

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct CmmWeights {
    double exact = 0.6;
    double partial = 0.4;
};

struct DemWeights {
    double properties = 1.0;
    double subclasses = 0.25;
    double superclasses = 0.25;
    double siblings = 0.25;
};

/// Query input for the class match measure: lowercased, trimmed, unique.
struct QueryTerms {
    std::vector<std::string> terms;

    static QueryTerms of(const std::vector<std::string>& raw) {
        std::set<std::string> seen;
        for (const auto& t : raw) {
            std::string s;
            for (char c : t)
                if (!std::isspace(static_cast<unsigned char>(c)))
                    s += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
            if (!s.empty()) seen.insert(std::move(s));
        }
        return {{seen.begin(), seen.end()}};
    }
};

/// Splits a label on whitespace, '_', '-' and camelCase humps, lowercased.
/// "PersonAgent" -> {person, agent}; "HTTPServer" -> {http, server}.
inline std::vector<std::string> tokenize_label(std::string_view label) {
    std::vector<std::string> words;
    std::string word;
    auto flush = [&] {
        if (!word.empty()) {
            words.push_back(word);
            word.clear();
        }
    };
    for (std::size_t i = 0; i < label.size(); ++i) {
        const unsigned char c = static_cast<unsigned char>(label[i]);
        if (std::isspace(c) || c == '_' || c == '-') {
            flush();
            continue;
        }
        if (std::isupper(c) && i > 0) {
            const unsigned char prev = static_cast<unsigned char>(label[i - 1]);
            const bool after_lower = std::islower(prev) || std::isdigit(prev);
            const bool hump_end = std::isupper(prev) && i + 1 < label.size() &&
                                  std::islower(static_cast<unsigned char>(label[i + 1]));
            if (after_lower || hump_end) flush();
        }
        word += static_cast<char>(std::tolower(c));
    }
    flush();
    return words;
}

/// Types as documents, properties as binary terms:
/// score(e) = sum over props(e) of ln(|E| / df(p)).
inline RankedList tfidf_rank(const Schema& schema) {
    MetricIndex ix(schema);
    const double n = static_cast<double>(schema.entity_types.size());
    std::vector<RankedEntry> entries;
    for (const auto& e : schema.entity_types) {
        double score = 0.0;
        for (const auto& pid : e.properties) score += std::log(n / static_cast<double>(ix.df(pid)));
        entries.push_back({e.id, e.label, score});
    }
    return make_ranked_list(schema.name, "tfidf", std::move(entries));
}

/// Okapi BM25 with binary term frequency. idf uses the +1-smoothed form,
/// ln((|E| - df + 0.5)/(df + 0.5) + 1), which stays nonnegative when a
/// property occurs in more than half the types.
inline RankedList bm25_rank(const Schema& schema, Bm25Params params = {}) {
    MetricIndex ix(schema);
    const double n = static_cast<double>(schema.entity_types.size());
    double avgdl = 0.0;
    for (const auto& e : schema.entity_types) avgdl += static_cast<double>(e.properties.size());
    avgdl /= n;

    std::vector<RankedEntry> entries;
    for (const auto& e : schema.entity_types) {
        double score = 0.0;
        if (!e.properties.empty()) {
            const double dl = static_cast<double>(e.properties.size());
            const double norm =
                (params.k1 + 1.0) / (1.0 + params.k1 * (1.0 - params.b + params.b * dl / avgdl));
            for (const auto& pid : e.properties) {
                const double df = static_cast<double>(ix.df(pid));
                score += std::log((n - df + 0.5) / (df + 0.5) + 1.0) * norm;
            }
        }
        entries.push_back({e.id, e.label, score});
    }
    return make_ranked_list(schema.name, "bm25", std::move(entries));
}

/// Class match measure over tokenized labels: a query term scores the
/// exact weight when it equals a token and the partial weight when it is
/// a strict substring of one.
inline RankedList cmm_rank(const Schema& schema, const QueryTerms& query, CmmWeights w = {}) {
    std::vector<RankedEntry> entries;
    for (const auto& e : schema.entity_types) {
        const auto tokens = tokenize_label(e.label);
        double exact = 0.0, partial = 0.0;
        for (const auto& term : query.terms) {
            bool is_exact = false, is_partial = false;
            for (const auto& tok : tokens) {
                if (term == tok) is_exact = true;
                else if (tok.find(term) != std::string::npos) is_partial = true;
            }
            if (is_exact) exact += 1.0;
            if (is_partial) partial += 1.0;
        }
        entries.push_back({e.id, e.label, w.exact * exact + w.partial * partial});
    }
    return make_ranked_list(schema.name, "cmm", std::move(entries));
}

/// Density measure: weighted count of properties, direct subclasses,
/// direct superclasses and siblings (types sharing a direct parent).
inline RankedList dem_rank(const Schema& schema, DemWeights w = {}) {
    std::unordered_map<std::string, std::vector<std::string>> children_of; // parent -> children
    std::unordered_map<std::string, std::vector<std::string>> parents_of;
    for (const auto& edge : schema.subclass_edges) {
        children_of[edge.parent].push_back(edge.child);
        parents_of[edge.child].push_back(edge.parent);
    }

    std::vector<RankedEntry> entries;
    for (const auto& e : schema.entity_types) {
        auto cit = children_of.find(e.id);
        const std::size_t n_sub = cit == children_of.end() ? 0 : cit->second.size();
        auto pit = parents_of.find(e.id);
        const std::size_t n_super = pit == parents_of.end() ? 0 : pit->second.size();
        std::unordered_set<std::string> siblings;
        if (pit != parents_of.end())
            for (const auto& parent : pit->second)
                for (const auto& sib : children_of[parent])
                    if (sib != e.id) siblings.insert(sib);
        const double score = w.properties * static_cast<double>(e.properties.size()) +
                             w.subclasses * static_cast<double>(n_sub) +
                             w.superclasses * static_cast<double>(n_super) +
                             w.siblings * static_cast<double>(siblings.size());
        entries.push_back({e.id, e.label, score});
    }
    return make_ranked_list(schema.name, "dem", std::move(entries));
}

} // namespace kbfocus
