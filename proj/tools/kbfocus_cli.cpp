// kbfocus: schema focus metrics, rankings and the ETR experiment from
// the command line. Results go to stdout (or --out); warnings and
// errors go to stderr. Exit codes: 0 ok, 1 usage, 2 parse error,
// 3 validation error, 4 undefined metric.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kbfocus/kbfocus.hpp"

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string corpus;
    std::string format = "csv";
    std::string out;
    bool inherit = false;
    double k1 = 1.2;
    double b = 0.75;
    double cmm_exact = 0.6;
    double cmm_partial = 0.4;
    std::vector<std::string> query;
    std::size_t n = 50;
    double rho = 0.8;
    double eta = 0.02;
    int outer_folds = 50;
    int inner_folds = 5;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> top_k;
    std::string distance = "jaccard";
    std::string tree_grid;
    std::string knn_grid;

    kbfocus::RankParams rank_params() const {
        kbfocus::RankParams p;
        p.bm25 = {k1, b};
        p.cmm = {cmm_exact, cmm_partial};
        p.query = kbfocus::QueryTerms::of(query);
        return p;
    }
};

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw kbfocus::ValidationError("cannot read \"" + path.string() + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void print_warnings(const kbfocus::Schema& schema) {
    for (const auto& w : schema.warnings) std::cerr << "warning: " << schema.name << ": " << w << "\n";
}

kbfocus::Corpus require_corpus(const Options& o, const char* subcommand) {
    if (o.corpus.empty())
        throw UsageError(std::string(subcommand) +
                         " requires a corpus; pass --corpus or set KBFOCUS_CORPUS");
    return kbfocus::Corpus(o.corpus);
}

kbfocus::Schema parse_schema_bytes(const std::string& bytes, const fs::path& path,
                                   const std::string& name, const std::string& syntax) {
    if (syntax == "json") return kbfocus::parse_canonical_json(bytes, name);
    if (syntax == "csv") return kbfocus::parse_canonical_csv(bytes, name);
    if (syntax == "nt") return kbfocus::parse_ntriples_vocab(bytes, name);
    return kbfocus::parse_schema_file_bytes(bytes, path, name);
}

// A positional input is a schema file when it exists on disk, otherwise
// a schema name resolved against the corpus.
kbfocus::Schema load_input(const std::string& input, const Options& o) {
    kbfocus::Schema schema;
    if (fs::exists(input) && fs::is_regular_file(input)) {
        schema = kbfocus::parse_schema_file_bytes(read_file(input), input,
                                                  fs::path(input).stem().string());
    } else if (!o.corpus.empty()) {
        schema = kbfocus::Corpus(o.corpus).load(input);
    } else {
        throw kbfocus::ValidationError("\"" + input +
                                       "\" is not a file, and no corpus is configured to look it up in");
    }
    print_warnings(schema);
    if (o.inherit) schema = kbfocus::inherit_properties(schema);
    return schema;
}

std::vector<int> parse_grid(const std::string& text, bool tree) {
    std::vector<int> grid;
    std::string token;
    std::istringstream ss(text);
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        if (tree && (token == "none" || token == "unbounded")) {
            grid.push_back(-1);
            continue;
        }
        try {
            const int v = std::stoi(token);
            if (v < 1) throw std::invalid_argument("non-positive");
            grid.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("invalid grid value \"" + token + "\"");
        }
    }
    if (grid.empty()) throw UsageError("grid must contain at least one value");
    return grid;
}

std::string dump(const nlohmann::json& doc) { return doc.dump(2) + "\n"; }

// --- subcommand bodies, each returning the stdout payload -------------

std::string run_ingest(const std::string& file, std::string name, const std::string& syntax,
                       const Options& o) {
    auto corpus = require_corpus(o, "ingest");
    if (!fs::exists(file)) throw kbfocus::ValidationError("no such file: \"" + file + "\"");
    if (name.empty()) name = fs::path(file).stem().string();
    const kbfocus::Schema schema = parse_schema_bytes(read_file(file), file, name, syntax);
    print_warnings(schema);
    corpus.add(name, schema);
    const auto stats = kbfocus::schema_stats(schema);
    std::cerr << "ingested \"" << name << "\": " << stats.entity_types << " entity types, "
              << stats.properties << " properties\n";
    return {};
}

std::string run_stats(const std::string& input, const Options& o) {
    const auto schema = load_input(input, o);
    const auto s = kbfocus::schema_stats(schema);
    if (o.format == "json")
        return dump({{"schema", schema.name},
                     {"entity_types", s.entity_types},
                     {"properties", s.properties},
                     {"incidences", s.incidences},
                     {"density", s.density}});
    return "schema,entity_types,properties,incidences,density\n" + schema.name + ',' +
           std::to_string(s.entity_types) + ',' + std::to_string(s.properties) + ',' +
           std::to_string(s.incidences) + ',' + kbfocus::detail::fmt6(s.density) + '\n';
}

std::string run_report(const std::string& input, const Options& o) {
    const auto report = kbfocus::metric_report(load_input(input, o));
    return o.format == "json" ? dump(kbfocus::to_json(report)) : kbfocus::to_csv(report);
}

std::string run_rank_entities(const std::string& input, const std::string& metric,
                              const Options& o) {
    const auto schema = load_input(input, o);
    const auto ranked =
        kbfocus::rank_entity_types(schema, kbfocus::parse_metric(metric), o.rank_params());
    return o.format == "json" ? dump(kbfocus::to_json(ranked)) : kbfocus::to_csv(ranked);
}

std::string run_rank_schemas(const Options& o) {
    auto corpus = require_corpus(o, "rank-schemas");
    std::vector<kbfocus::MetricReport> reports;
    auto entries = corpus.list();
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
    for (const auto& e : entries) reports.push_back(corpus.cached_report(e.name, o.inherit));
    const auto rows = kbfocus::rank_schemas(reports);
    return o.format == "json" ? dump(kbfocus::to_json(rows)) : kbfocus::to_csv(rows);
}

std::string run_tag(const std::string& input, const Options& o) {
    const auto tags = kbfocus::derive_schema_tags(load_input(input, o), o.top_k.value_or(5));
    if (o.format == "json") return dump(nlohmann::json(tags));
    std::string out = "rank,tag\n";
    for (std::size_t i = 0; i < tags.size(); ++i)
        out += std::to_string(i + 1) + ',' + tags[i] + '\n';
    return out;
}

std::string run_export_fca(const std::string& input, const std::string& fca_format,
                           const Options& o) {
    const auto ctx = kbfocus::to_formal_context(load_input(input, o));
    return fca_format == "csv" ? kbfocus::export_fca_csv(ctx) : kbfocus::export_cxt(ctx);
}

std::string run_etr(const std::string& input, const std::string& model, const Options& o) {
    if (!o.seed)
        throw UsageError("etr requires --seed: the experiment is stochastic and the seed "
                         "must be explicit");
    std::vector<kbfocus::Schema> schemas;
    if (!input.empty()) {
        schemas.push_back(load_input(input, o));
    } else {
        auto corpus = require_corpus(o, "etr");
        schemas = corpus.load_all();
        for (auto& s : schemas) {
            print_warnings(s);
            if (o.inherit) s = kbfocus::inherit_properties(s);
        }
    }

    std::vector<kbfocus::ModelKind> kinds;
    if (model == "both")
        kinds = {kbfocus::ModelKind::tree, kbfocus::ModelKind::knn};
    else
        kinds = {kbfocus::parse_model(model)};

    const auto distance =
        o.distance == "hamming" ? kbfocus::BitDistance::hamming : kbfocus::BitDistance::jaccard;

    std::vector<kbfocus::EtrReport> reports;
    for (const auto& schema : schemas) {
        const auto instances = kbfocus::generate_instances(
            schema, {o.n, o.rho, o.eta, *o.seed});
        for (const auto kind : kinds) {
            kbfocus::CvParams params;
            params.outer_folds = o.outer_folds;
            params.inner_folds = o.inner_folds;
            params.seed = *o.seed;
            params.distance = distance;
            if (kind == kbfocus::ModelKind::tree && !o.tree_grid.empty())
                params.grid = parse_grid(o.tree_grid, true);
            if (kind == kbfocus::ModelKind::knn && !o.knn_grid.empty())
                params.grid = parse_grid(o.knn_grid, false);
            auto report = kbfocus::nested_cv(instances, kind, params);
            for (const auto& w : report.warnings)
                std::cerr << "warning: " << report.schema << " (" << report.model << "): " << w
                          << "\n";
            reports.push_back(std::move(report));
        }
    }

    if (o.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : reports) doc.push_back(kbfocus::to_json(r));
        return dump(doc);
    }
    std::string out = "schema,model,fold,accuracy,chosen\n";
    for (const auto& r : reports) {
        const auto kind = kbfocus::parse_model(r.model);
        for (const auto& f : r.folds)
            out += r.schema + ',' + r.model + ',' + std::to_string(f.fold) + ',' +
                   kbfocus::detail::fmt6(f.accuracy) + ',' +
                   kbfocus::describe_grid_value(kind, f.chosen) + '\n';
        out += r.schema + ',' + r.model + ",mean," + kbfocus::detail::fmt6(r.mean_accuracy) +
               ",\n";
    }
    return out;
}

std::string run_compare(const std::vector<std::string>& ref_paths, const Options& o) {
    auto corpus = require_corpus(o, "compare");
    auto schemas = corpus.load_all();
    for (auto& s : schemas) {
        print_warnings(s);
        if (o.inherit) s = kbfocus::inherit_properties(s);
    }

    std::map<std::string, kbfocus::ReferenceRanking> refs;
    auto add_ref = [&](const fs::path& path) {
        auto ref = kbfocus::parse_reference(read_file(path));
        if (!refs.emplace(ref.schema, ref).second)
            throw kbfocus::ValidationError("duplicate reference ranking for schema \"" +
                                           ref.schema + "\"");
    };
    for (const auto& p : ref_paths) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) add_ref(f);
        } else {
            add_ref(p);
        }
    }

    const auto table = kbfocus::compare_rankers(schemas, refs, o.top_k.value_or(10), o.rank_params());
    for (const auto& name : table.missing_reference)
        std::cerr << "warning: no reference ranking for \"" << name << "\"; excluded from means\n";
    return o.format == "json" ? dump(kbfocus::to_json(table)) : kbfocus::to_csv(table);
}

std::string run_correlate(const std::string& reports_dir, const Options& o) {
    auto corpus = require_corpus(o, "correlate");
    if (!fs::is_directory(reports_dir))
        throw kbfocus::ValidationError("--reports must name a directory of ETR report JSON files");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(reports_dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    if (files.empty())
        throw kbfocus::ValidationError("no .json reports under \"" + reports_dir + "\"");

    std::vector<kbfocus::EtrReport> reports;
    for (const auto& f : files)
        for (auto& r : kbfocus::etr_reports_from_json(read_file(f)))
            reports.push_back(std::move(r));
    std::map<std::string, double> focus;
    for (const auto& r : reports)
        if (!focus.count(r.schema)) focus[r.schema] = corpus.cached_report(r.schema, o.inherit).focus_k;

    const auto rows = kbfocus::focus_accuracy_correlation(reports, focus);
    if (o.format == "json") {
        nlohmann::json doc = nlohmann::json::array();
        for (const auto& r : rows)
            doc.push_back({{"model", r.model}, {"spearman", r.rho}, {"schemas", r.schemas}});
        return dump(doc);
    }
    return kbfocus::to_csv(rows);
}

void emit(const std::string& payload, const Options& o) {
    if (o.out.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(o.out, std::ios::binary | std::ios::trunc);
    if (!out) throw kbfocus::ValidationError("cannot write \"" + o.out + "\"");
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

} // namespace

int main(int argc, char** argv) {
    Options o;
    CLI::App app{"Focus metrics, rankings and entity type recognition for knowledge base schemas"};
    app.name("kbfocus");
    app.fallthrough();
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "key=value configuration file ('#' comments)");
    app.allow_config_extras(CLI::config_extras_mode::error);

    const auto prob_open_closed = CLI::Validator(
        [](std::string& s) -> std::string {
            const double v = std::stod(s);
            return (v > 0.0 && v <= 1.0) ? std::string{} : "value must be in (0,1]";
        },
        "(0,1]");
    const auto prob_closed_open = CLI::Validator(
        [](std::string& s) -> std::string {
            const double v = std::stod(s);
            return (v >= 0.0 && v < 1.0) ? std::string{} : "value must be in [0,1)";
        },
        "[0,1)");

    app.add_option("--corpus", o.corpus, "corpus root directory")->envname("KBFOCUS_CORPUS");
    app.add_option("--format", o.format, "output format")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--out", o.out, "write results to a file instead of stdout");
    app.add_flag("--inherit", o.inherit, "union subclass properties into each entity type first");
    app.add_option("--k1", o.k1, "BM25 k1")->check(CLI::NonNegativeNumber);
    app.add_option("--b", o.b, "BM25 b")->check(CLI::Range(0.0, 1.0));
    app.add_option("--cmm-exact", o.cmm_exact, "CMM exact-match weight")->check(CLI::NonNegativeNumber);
    app.add_option("--cmm-partial", o.cmm_partial, "CMM partial-match weight")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--query", o.query, "query terms for the cmm ranker");
    app.add_option("--n", o.n, "generated instances per entity type")->check(CLI::PositiveNumber);
    app.add_option("--rho", o.rho, "owned-property retention probability")->check(prob_open_closed);
    app.add_option("--eta", o.eta, "non-owned-property noise probability")->check(prob_closed_open);
    app.add_option("--outer-folds", o.outer_folds, "outer CV folds")->check(CLI::Range(2, 1000000));
    app.add_option("--inner-folds", o.inner_folds, "inner CV folds")->check(CLI::Range(2, 1000000));
    app.add_option("--seed", o.seed, "PRNG seed (required for etr)");
    app.add_option("--k", o.top_k, "top-k cutoff (tag: 5, compare: 10)")->check(CLI::PositiveNumber);
    app.add_option("--distance", o.distance, "k-NN distance")
        ->check(CLI::IsMember({"jaccard", "hamming"}));
    app.add_option("--tree-grid", o.tree_grid, "tree max-depth grid, e.g. 2,4,8,none");
    app.add_option("--knn-grid", o.knn_grid, "k-NN neighbour grid, e.g. 1,3,5");

    auto* ingest = app.add_subcommand("ingest", "parse a schema file and add it to the corpus");
    std::string ingest_file, ingest_name, ingest_syntax;
    ingest->add_option("file", ingest_file, "schema file (.json, .csv, .nt)")->required();
    ingest->add_option("--name", ingest_name, "corpus name (default: file stem)");
    ingest->add_option("--input-format", ingest_syntax, "force input syntax")
        ->check(CLI::IsMember({"json", "csv", "nt"}));

    auto* stats = app.add_subcommand("stats", "size and density of a schema");
    std::string stats_input;
    stats->add_option("input", stats_input, "schema file or corpus name")->required();

    auto* report = app.add_subcommand("report", "full metric report for a schema");
    std::string report_input;
    report->add_option("input", report_input, "schema file or corpus name")->required();

    auto* rank_entities = app.add_subcommand("rank-entities", "rank entity types by a metric");
    std::string re_input, re_metric;
    rank_entities->add_option("input", re_input, "schema file or corpus name")->required();
    rank_entities->add_option("--metric", re_metric, "focus|tfidf|bm25|cmm|dem")->required();

    auto* rank_schemas_cmd = app.add_subcommand("rank-schemas", "rank the corpus by Focus(K)");

    auto* tag = app.add_subcommand("tag", "derive schema tags from the focus ranking");
    std::string tag_input;
    tag->add_option("input", tag_input, "schema file or corpus name")->required();

    auto* export_fca = app.add_subcommand("export-fca", "emit the formal context of a schema");
    std::string fca_input, fca_format = "cxt";
    export_fca->add_option("input", fca_input, "schema file or corpus name")->required();
    export_fca->add_option("--fca-format", fca_format, "cxt|csv")
        ->check(CLI::IsMember({"cxt", "csv"}));

    auto* etr = app.add_subcommand("etr", "entity type recognition via nested cross-validation");
    std::string etr_input, etr_model = "both";
    etr->add_option("input", etr_input, "schema file or corpus name (default: whole corpus)");
    etr->add_option("--model", etr_model, "tree|knn|both")
        ->check(CLI::IsMember({"tree", "knn", "both"}));

    auto* compare = app.add_subcommand("compare", "top-k accuracy of every ranker vs references");
    std::vector<std::string> compare_refs;
    compare->add_option("--refs", compare_refs, "reference ranking files or directories")
        ->required();

    auto* correlate = app.add_subcommand("correlate", "Spearman of Focus(K) vs ETR accuracy");
    std::string correlate_reports;
    correlate->add_option("--reports", correlate_reports, "directory of ETR report JSON files")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        std::string payload;
        if (ingest->parsed())
            payload = run_ingest(ingest_file, ingest_name, ingest_syntax, o);
        else if (stats->parsed())
            payload = run_stats(stats_input, o);
        else if (report->parsed())
            payload = run_report(report_input, o);
        else if (rank_entities->parsed())
            payload = run_rank_entities(re_input, re_metric, o);
        else if (rank_schemas_cmd->parsed())
            payload = run_rank_schemas(o);
        else if (tag->parsed())
            payload = run_tag(tag_input, o);
        else if (export_fca->parsed())
            payload = run_export_fca(fca_input, fca_format, o);
        else if (etr->parsed())
            payload = run_etr(etr_input, etr_model, o);
        else if (compare->parsed())
            payload = run_compare(compare_refs, o);
        else if (correlate->parsed())
            payload = run_correlate(correlate_reports, o);
        else {
            std::cerr << app.help();
            return 1;
        }
        emit(payload, o);
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const kbfocus::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const kbfocus::UndefinedMetricError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const kbfocus::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
