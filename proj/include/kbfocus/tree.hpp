#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "kbfocus/errors.hpp"
#include "kbfocus/instances.hpp"

namespace kbfocus {

/// CART-style binary decision tree for 0/1 attribute vectors.
///
/// Splits minimize weighted Gini impurity; among equal reductions the
/// lowest attribute index wins. A node becomes a leaf when it is pure,
/// the depth limit is reached, or no attribute separates its instances
/// (zero-gain splits that do separate are taken, so patterns like XOR
/// still resolve at depth 2). Leaves predict the majority label, ties
/// going to the lexicographically smallest.
class DecisionTree {
public:
    /// max_depth < 0 trains an unbounded tree.
    static DecisionTree train(const InstanceSet& data, const std::vector<std::size_t>& indices,
                              int max_depth) {
        if (indices.empty()) throw ValidationError("decision tree training set is empty");
        DecisionTree tree;
        std::vector<std::string> labels;
        for (std::size_t i : indices) labels.push_back(data.instances[i].label);
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        tree.labels_ = std::move(labels);

        std::vector<std::size_t> work(indices.begin(), indices.end());
        tree.build(data, work, 0, max_depth);
        return tree;
    }

    static DecisionTree train(const InstanceSet& data, int max_depth) {
        std::vector<std::size_t> all(data.instances.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        return train(data, all, max_depth);
    }

    const std::string& predict(std::span<const std::uint8_t> bits) const {
        std::size_t node = 0;
        while (nodes_[node].label < 0) {
            const auto& n = nodes_[node];
            node = bits[static_cast<std::size_t>(n.attribute)] ? n.one : n.zero;
        }
        return labels_[static_cast<std::size_t>(nodes_[node].label)];
    }

    std::size_t node_count() const { return nodes_.size(); }

private:
    struct Node {
        int attribute = -1;
        int label = -1; // >= 0 marks a leaf
        int zero = -1;
        int one = -1;
    };

    int label_id(const std::string& label) const {
        const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        return static_cast<int>(it - labels_.begin());
    }

    std::vector<std::size_t> count_labels(const InstanceSet& data,
                                          const std::vector<std::size_t>& idx) const {
        std::vector<std::size_t> counts(labels_.size(), 0);
        for (std::size_t i : idx) ++counts[static_cast<std::size_t>(label_id(data.instances[i].label))];
        return counts;
    }

    static double gini(const std::vector<std::size_t>& counts, std::size_t total) {
        if (total == 0) return 0.0;
        double g = 1.0;
        for (std::size_t c : counts) {
            const double p = static_cast<double>(c) / static_cast<double>(total);
            g -= p * p;
        }
        return g;
    }

    // Majority label id, ties to the smallest id (labels_ is sorted).
    static int majority(const std::vector<std::size_t>& counts) {
        std::size_t best = 0;
        int at = 0;
        for (std::size_t l = 0; l < counts.size(); ++l)
            if (counts[l] > best) {
                best = counts[l];
                at = static_cast<int>(l);
            }
        return at;
    }

    int build(const InstanceSet& data, std::vector<std::size_t>& idx, int depth, int max_depth) {
        const auto counts = count_labels(data, idx);
        const std::size_t n = idx.size();
        const bool pure = std::count_if(counts.begin(), counts.end(),
                                        [](std::size_t c) { return c > 0; }) <= 1;
        if (pure || (max_depth >= 0 && depth >= max_depth)) {
            nodes_.push_back({-1, majority(counts), -1, -1});
            return static_cast<int>(nodes_.size() - 1);
        }

        const double parent_gini = gini(counts, n);
        const std::size_t n_attrs = data.attributes.size();
        int best_attr = -1;
        double best_gain = -1.0;
        std::vector<std::size_t> ones(counts.size());
        for (std::size_t a = 0; a < n_attrs; ++a) {
            std::fill(ones.begin(), ones.end(), 0);
            std::size_t n_one = 0;
            for (std::size_t i : idx)
                if (data.instances[i].bits[a]) {
                    ++ones[static_cast<std::size_t>(label_id(data.instances[i].label))];
                    ++n_one;
                }
            if (n_one == 0 || n_one == n) continue; // does not separate
            std::vector<std::size_t> zeros(counts.size());
            for (std::size_t l = 0; l < counts.size(); ++l) zeros[l] = counts[l] - ones[l];
            const std::size_t n_zero = n - n_one;
            const double gain = parent_gini -
                                (static_cast<double>(n_zero) / static_cast<double>(n)) * gini(zeros, n_zero) -
                                (static_cast<double>(n_one) / static_cast<double>(n)) * gini(ones, n_one);
            if (gain > best_gain) {
                best_gain = gain;
                best_attr = static_cast<int>(a);
            }
        }
        if (best_attr < 0) {
            nodes_.push_back({-1, majority(counts), -1, -1});
            return static_cast<int>(nodes_.size() - 1);
        }

        std::vector<std::size_t> zero_idx, one_idx;
        for (std::size_t i : idx)
            (data.instances[i].bits[static_cast<std::size_t>(best_attr)] ? one_idx : zero_idx)
                .push_back(i);
        idx.clear();
        idx.shrink_to_fit();

        const int me = static_cast<int>(nodes_.size());
        nodes_.push_back({best_attr, -1, -1, -1});
        nodes_[static_cast<std::size_t>(me)].zero = build(data, zero_idx, depth + 1, max_depth);
        nodes_[static_cast<std::size_t>(me)].one = build(data, one_idx, depth + 1, max_depth);
        return me;
    }

    std::vector<Node> nodes_;
    std::vector<std::string> labels_;
};

} // namespace kbfocus
