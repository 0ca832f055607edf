#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kbfocus/errors.hpp"
#include "kbfocus/instances.hpp"

namespace kbfocus {

enum class BitDistance { jaccard, hamming };

inline std::string_view to_string(BitDistance d) {
    return d == BitDistance::jaccard ? "jaccard" : "hamming";
}

namespace detail {

// 64-bit packing of 0/1 vectors; popcount makes the distance loops cheap.
struct PackedBits {
    std::vector<std::uint64_t> words;
    std::size_t length = 0;

    static PackedBits pack(std::span<const std::uint8_t> bits) {
        PackedBits p;
        p.length = bits.size();
        p.words.assign((bits.size() + 63) / 64, 0);
        for (std::size_t i = 0; i < bits.size(); ++i)
            if (bits[i]) p.words[i / 64] |= (std::uint64_t{1} << (i % 64));
        return p;
    }
};

inline double bit_distance(const PackedBits& a, const PackedBits& b, BitDistance kind) {
    std::size_t inter = 0, uni = 0, diff = 0;
    for (std::size_t w = 0; w < a.words.size(); ++w) {
        inter += static_cast<std::size_t>(std::popcount(a.words[w] & b.words[w]));
        uni += static_cast<std::size_t>(std::popcount(a.words[w] | b.words[w]));
        diff += static_cast<std::size_t>(std::popcount(a.words[w] ^ b.words[w]));
    }
    if (kind == BitDistance::hamming)
        return a.length == 0 ? 0.0 : static_cast<double>(diff) / static_cast<double>(a.length);
    if (uni == 0) return 0.0; // two all-zero vectors
    return 1.0 - static_cast<double>(inter) / static_cast<double>(uni);
}

} // namespace detail

/// k-nearest-neighbour classifier on binary vectors. Jaccard distance by
/// default (shared absences carry no signal in sparse property vectors);
/// Hamming is available. Neighbour ties break on the lower training
/// index, vote ties on the lexicographically smallest label.
class KnnClassifier {
public:
    static KnnClassifier train(const InstanceSet& data, const std::vector<std::size_t>& indices,
                               int k, BitDistance distance = BitDistance::jaccard) {
        if (indices.empty()) throw ValidationError("k-NN training set is empty");
        if (k < 1) throw ValidationError("k-NN requires k >= 1");
        KnnClassifier m;
        m.k_ = k;
        m.distance_ = distance;
        for (std::size_t i : indices) {
            m.vectors_.push_back(detail::PackedBits::pack(data.instances[i].bits));
            m.labels_.push_back(data.instances[i].label);
        }
        return m;
    }

    static KnnClassifier train(const InstanceSet& data, int k,
                               BitDistance distance = BitDistance::jaccard) {
        std::vector<std::size_t> all(data.instances.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return train(data, all, k, distance);
    }

    std::string predict(std::span<const std::uint8_t> bits) const {
        const auto q = detail::PackedBits::pack(bits);
        std::vector<std::pair<double, std::size_t>> dist;
        dist.reserve(vectors_.size());
        for (std::size_t i = 0; i < vectors_.size(); ++i)
            dist.emplace_back(detail::bit_distance(q, vectors_[i], distance_), i);
        const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k_), dist.size());
        std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take),
                          dist.end());

        std::map<std::string_view, std::size_t> votes; // key order = label order
        for (std::size_t i = 0; i < take; ++i) ++votes[labels_[dist[i].second]];
        std::string_view winner;
        std::size_t best = 0;
        for (const auto& [label, count] : votes)
            if (count > best) {
                best = count;
                winner = label;
            }
        return std::string(winner);
    }

private:
    int k_ = 1;
    BitDistance distance_ = BitDistance::jaccard;
    std::vector<detail::PackedBits> vectors_;
    std::vector<std::string> labels_;
};

/// Jaccard distance between two 0/1 vectors, exposed for tests and tools.
inline double jaccard_distance(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    return detail::bit_distance(detail::PackedBits::pack(a), detail::PackedBits::pack(b),
                                BitDistance::jaccard);
}

} // namespace kbfocus
