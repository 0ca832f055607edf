#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kbfocus/errors.hpp"
#include "kbfocus/instances.hpp"
#include "kbfocus/knn.hpp"
#include "kbfocus/metrics.hpp"
#include "kbfocus/prng.hpp"
#include "kbfocus/tree.hpp"

namespace kbfocus {

enum class ModelKind { tree, knn };

inline std::string_view to_string(ModelKind m) { return m == ModelKind::tree ? "tree" : "knn"; }

inline ModelKind parse_model(std::string_view name) {
    if (name == "tree") return ModelKind::tree;
    if (name == "knn") return ModelKind::knn;
    throw ValidationError("unknown model \"" + std::string(name) + "\" (expected tree|knn)");
}

/// Hyperparameter grid values: max_depth for trees (-1 = unbounded),
/// neighbour count for k-NN. Declared order is the tie-break order.
inline std::vector<int> default_grid(ModelKind kind) {
    return kind == ModelKind::tree ? std::vector<int>{2, 4, 8, -1} : std::vector<int>{1, 3, 5};
}

struct CvParams {
    int outer_folds = 50;
    int inner_folds = 5;
    std::vector<int> grid; // empty = default_grid(kind)
    std::uint64_t seed = 0;
    BitDistance distance = BitDistance::jaccard;
};

struct FoldResult {
    int fold = 0;
    double accuracy = 0.0;
    int chosen = 0; // grid value selected by the inner folds
};

struct EtrReport {
    std::string schema;
    std::string model;
    std::uint64_t seed = 0;
    GeneratorParams generator;
    int outer_folds = 0;
    int inner_folds = 0;
    std::string distance;
    std::vector<FoldResult> folds;
    double mean_accuracy = 0.0;
    std::vector<std::string> warnings;
};

namespace detail {

// Stratified round-robin: instances grouped per label (sorted label
// order, shuffled order within a label) and dealt to folds by one
// counter that runs across labels, so fold sizes differ by at most 1.
inline std::vector<int> assign_folds(const InstanceSet& data,
                                     const std::vector<std::size_t>& order, int folds,
                                     std::vector<std::string>* warnings) {
    std::map<std::string_view, std::vector<std::size_t>> by_label;
    for (std::size_t i : order) by_label[data.instances[i].label].push_back(i);

    std::vector<int> fold_of(data.instances.size(), -1);
    std::size_t counter = 0;
    for (const auto& [label, members] : by_label) {
        if (warnings && members.size() < static_cast<std::size_t>(folds))
            warnings->push_back("label \"" + std::string(label) + "\" has " +
                                std::to_string(members.size()) + " instances for " +
                                std::to_string(folds) +
                                " folds; assignment is unstratified for it");
        for (std::size_t i : members)
            fold_of[i] = static_cast<int>(counter++ % static_cast<std::size_t>(folds));
    }
    return fold_of;
}

struct TrainedModel {
    ModelKind kind;
    DecisionTree tree;
    KnnClassifier knn;

    std::string predict(const Instance& inst) const {
        return kind == ModelKind::tree ? tree.predict(inst.bits) : knn.predict(inst.bits);
    }
};

inline TrainedModel fit(const InstanceSet& data, const std::vector<std::size_t>& idx,
                        ModelKind kind, int grid_value, BitDistance distance) {
    TrainedModel m{kind, {}, {}};
    if (kind == ModelKind::tree)
        m.tree = DecisionTree::train(data, idx, grid_value);
    else
        m.knn = KnnClassifier::train(data, idx, grid_value, distance);
    return m;
}

inline double accuracy_on(const TrainedModel& model, const InstanceSet& data,
                          const std::vector<std::size_t>& idx) {
    if (idx.empty()) return 0.0;
    std::size_t correct = 0;
    for (std::size_t i : idx)
        if (model.predict(data.instances[i]) == data.instances[i].label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(idx.size());
}

} // namespace detail

/// Nested cross-validation: the outer folds estimate accuracy, the inner
/// folds (over each outer training portion) pick the grid value with the
/// best mean accuracy, first grid entry winning ties. Every step is a
/// pure function of (instances, seed).
inline EtrReport nested_cv(const InstanceSet& data, ModelKind kind, const CvParams& params) {
    const std::size_t n = data.instances.size();
    if (params.outer_folds < 2) throw ValidationError("nested CV requires >= 2 outer folds");
    if (static_cast<std::size_t>(params.outer_folds) > n)
        throw ValidationError("outer fold count " + std::to_string(params.outer_folds) +
                              " exceeds the " + std::to_string(n) + " instances");
    const std::vector<int> grid = params.grid.empty() ? default_grid(kind) : params.grid;

    EtrReport report;
    report.schema = data.schema;
    report.model = std::string(to_string(kind));
    report.seed = params.seed;
    report.generator = data.params;
    report.outer_folds = params.outer_folds;
    report.inner_folds = params.inner_folds;
    report.distance = std::string(to_string(params.distance));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    SplitMix64 rng(params.seed);
    rng.shuffle(order);

    const std::vector<int> outer_fold_of =
        detail::assign_folds(data, order, params.outer_folds, &report.warnings);

    for (int fold = 0; fold < params.outer_folds; ++fold) {
        std::vector<std::size_t> train_idx, test_idx;
        for (std::size_t i : order)
            (outer_fold_of[i] == fold ? test_idx : train_idx).push_back(i);

        int chosen = grid.front();
        const int inner = std::min<int>(params.inner_folds, static_cast<int>(train_idx.size()));
        if (grid.size() > 1 && inner >= 2) {
            const std::vector<int> inner_fold_of =
                detail::assign_folds(data, train_idx, inner, nullptr);
            double best_mean = -1.0;
            for (int g : grid) {
                double mean = 0.0;
                for (int ifold = 0; ifold < inner; ++ifold) {
                    std::vector<std::size_t> fit_idx, val_idx;
                    for (std::size_t i : train_idx)
                        (inner_fold_of[i] == ifold ? val_idx : fit_idx).push_back(i);
                    const auto model = detail::fit(data, fit_idx, kind, g, params.distance);
                    mean += detail::accuracy_on(model, data, val_idx);
                }
                mean /= static_cast<double>(inner);
                if (mean > best_mean) {
                    best_mean = mean;
                    chosen = g;
                }
            }
        }

        const auto model = detail::fit(data, train_idx, kind, chosen, params.distance);
        report.folds.push_back({fold, detail::accuracy_on(model, data, test_idx), chosen});
    }

    double mean = 0.0;
    for (const auto& f : report.folds) mean += f.accuracy;
    report.mean_accuracy = mean / static_cast<double>(report.folds.size());
    return report;
}

inline std::string describe_grid_value(ModelKind kind, int value) {
    if (kind == ModelKind::tree)
        return value < 0 ? std::string("max_depth=none") : "max_depth=" + std::to_string(value);
    return "k=" + std::to_string(value);
}

inline nlohmann::json to_json(const EtrReport& r) {
    const ModelKind kind = parse_model(r.model);
    nlohmann::json doc;
    doc["schema"] = r.schema;
    doc["model"] = r.model;
    doc["seed"] = r.seed;
    doc["generator"] = {{"per_type", r.generator.per_type},
                        {"retention", r.generator.retention},
                        {"noise", r.generator.noise},
                        {"seed", r.generator.seed}};
    doc["outer_folds"] = r.outer_folds;
    doc["inner_folds"] = r.inner_folds;
    doc["distance"] = r.distance;
    doc["folds"] = nlohmann::json::array();
    for (const auto& f : r.folds)
        doc["folds"].push_back({{"fold", f.fold},
                                {"accuracy", f.accuracy},
                                {"chosen", describe_grid_value(kind, f.chosen)}});
    doc["mean_accuracy"] = r.mean_accuracy;
    doc["warnings"] = r.warnings;
    return doc;
}

inline std::string to_csv(const EtrReport& r) {
    const ModelKind kind = parse_model(r.model);
    std::string out = "fold,accuracy,chosen\n";
    for (const auto& f : r.folds)
        out += std::to_string(f.fold) + ',' + detail::fmt6(f.accuracy) + ',' +
               describe_grid_value(kind, f.chosen) + '\n';
    out += "mean," + detail::fmt6(r.mean_accuracy) + ",\n";
    return out;
}

namespace detail {

inline EtrReport etr_report_from_doc(const nlohmann::json& doc) {
    EtrReport r;
    try {
        r.schema = doc.at("schema").get<std::string>();
        r.model = doc.at("model").get<std::string>();
        r.mean_accuracy = doc.at("mean_accuracy").get<double>();
        if (doc.contains("seed")) r.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("outer_folds")) r.outer_folds = doc.at("outer_folds").get<int>();
        if (doc.contains("inner_folds")) r.inner_folds = doc.at("inner_folds").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed ETR report: ") + e.what());
    }
    return r;
}

} // namespace detail

/// Reads back a report written by to_json; only the fields the
/// correlation needs are required.
inline EtrReport etr_report_from_json(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid ETR report JSON: ") + e.what());
    }
    return detail::etr_report_from_doc(doc);
}

/// Reads a report file that holds either one report object or an array
/// of them (the shape `etr --format json` writes).
inline std::vector<EtrReport> etr_reports_from_json(std::string_view bytes) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(bytes);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid ETR report JSON: ") + e.what());
    }
    std::vector<EtrReport> out;
    if (doc.is_array())
        for (const auto& entry : doc) out.push_back(detail::etr_report_from_doc(entry));
    else
        out.push_back(detail::etr_report_from_doc(doc));
    return out;
}

/// Spearman rank correlation with average ranks on ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ValidationError("spearman requires equal-length series");
    const std::size_t n = x.size();
    if (n < 3) throw UndefinedMetricError("spearman undefined for fewer than 3 points");

    auto ranks = [n](const std::vector<double>& v) {
        std::vector<std::size_t> order(n);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
        std::vector<double> rank(n);
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
            const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
            for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
            i = j + 1;
        }
        return rank;
    };
    const auto rx = ranks(x), ry = ranks(y);
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += rx[i];
        my += ry[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double cov = 0, vx = 0, vy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (rx[i] - mx) * (ry[i] - my);
        vx += (rx[i] - mx) * (rx[i] - mx);
        vy += (ry[i] - my) * (ry[i] - my);
    }
    if (vx == 0.0 || vy == 0.0)
        throw UndefinedMetricError("spearman undefined: a series is constant");
    return cov / std::sqrt(vx * vy);
}

struct CorrelationRow {
    std::string model;
    double rho = 0.0;
    std::size_t schemas = 0;
};

/// Spearman correlation between Focus(K) and mean ETR accuracy, per model.
inline std::vector<CorrelationRow> focus_accuracy_correlation(
    const std::vector<EtrReport>& reports, const std::map<std::string, double>& focus_by_schema) {
    std::map<std::string, std::vector<std::pair<double, double>>> points; // model -> (focus, acc)
    for (const auto& r : reports) {
        auto it = focus_by_schema.find(r.schema);
        if (it == focus_by_schema.end()) continue;
        points[r.model].emplace_back(it->second, r.mean_accuracy);
    }
    std::vector<CorrelationRow> rows;
    for (const auto& [model, pts] : points) {
        if (pts.size() < 3)
            throw UndefinedMetricError("focus-accuracy correlation for model \"" + model +
                                       "\" needs >= 3 schemas, has " + std::to_string(pts.size()));
        std::vector<double> f, a;
        for (const auto& [fv, av] : pts) {
            f.push_back(fv);
            a.push_back(av);
        }
        rows.push_back({model, spearman(f, a), pts.size()});
    }
    return rows;
}

inline std::string to_csv(const std::vector<CorrelationRow>& rows) {
    std::string out = "model,spearman,schemas\n";
    for (const auto& r : rows)
        out += r.model + ',' + detail::fmt6(r.rho) + ',' + std::to_string(r.schemas) + '\n';
    return out;
}

} // namespace kbfocus
