#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kbfocus/errors.hpp"
#include "kbfocus/metrics.hpp"
#include "kbfocus/ntriples.hpp"
#include "kbfocus/schema.hpp"
#include "kbfocus/schema_io.hpp"

namespace kbfocus {

inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline std::string content_hash(std::string_view bytes) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes)));
    return buf;
}

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read \"" + path.string() + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Temp-file-plus-rename so readers never observe a partial write.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot write \"" + tmp.string() + "\"");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw ValidationError("short write to \"" + tmp.string() + "\"");
    }
    std::filesystem::rename(tmp, path);
}

} // namespace detail

/// Parses schema bytes by file extension (.json, .csv, .nt/.ntriples),
/// sniffing the content when the extension is unknown.
inline Schema parse_schema_file_bytes(std::string_view bytes, const std::filesystem::path& path,
                                      std::string_view name) {
    const std::string ext = path.extension().string();
    if (ext == ".json") return parse_canonical_json(bytes, name);
    if (ext == ".csv") return parse_canonical_csv(bytes, name);
    if (ext == ".nt" || ext == ".ntriples") return parse_ntriples_vocab(bytes, name);
    const std::size_t first = bytes.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && bytes[first] == '<')
        return parse_ntriples_vocab(bytes, name);
    return parse_canonical(bytes, name);
}

/// On-disk schema collection: a manifest of (name, path, content hash)
/// plus a metric-report cache keyed by content hash and metric-suite
/// version. Writers serialize through atomic manifest replacement;
/// readers re-hash file content on load and refuse stale entries.
class Corpus {
public:
    struct Entry {
        std::string name;
        std::string path; // relative to the corpus root
        std::string hash;
    };

    explicit Corpus(std::filesystem::path root) : root_(std::move(root)) {
        std::filesystem::create_directories(root_);
    }

    const std::filesystem::path& root() const { return root_; }

    /// Stores the schema as canonical JSON under the given name.
    void add(const std::string& name, const Schema& schema) {
        check_name(name);
        auto entries = read_manifest();
        for (const auto& e : entries)
            if (e.name == name)
                throw ValidationError("corpus already contains a schema named \"" + name + "\"");

        Schema copy = schema;
        copy.name = name;
        const std::string bytes = serialize_json(copy);
        std::filesystem::create_directories(root_ / "schemas");
        const std::string rel = "schemas/" + name + ".json";
        detail::write_file_atomic(root_ / rel, bytes);
        entries.push_back({name, rel, content_hash(bytes)});
        write_manifest(entries);
    }

    /// Manifest entries in insertion order.
    std::vector<Entry> list() const { return read_manifest(); }

    Schema load(const std::string& name) const {
        const Entry e = find(name);
        const std::string bytes = detail::read_file(root_ / e.path);
        if (content_hash(bytes) != e.hash)
            throw ValidationError("stale manifest: content of \"" + e.path +
                                  "\" no longer matches the recorded hash for \"" + name + "\"");
        return parse_schema_file_bytes(bytes, root_ / e.path, name);
    }

    /// Every schema, in ascending name order.
    std::vector<Schema> load_all() const {
        auto entries = read_manifest();
        std::sort(entries.begin(), entries.end(),
                  [](const Entry& a, const Entry& b) { return a.name < b.name; });
        std::vector<Schema> schemas;
        schemas.reserve(entries.size());
        for (const auto& e : entries) schemas.push_back(load(e.name));
        return schemas;
    }

    /// Metric report with a content-addressed cache: a cached entry is
    /// reused only while the schema bytes and suite version both match,
    /// so a file edited behind the manifest's back surfaces as a
    /// stale-manifest error rather than a stale report.
    MetricReport cached_report(const std::string& name, bool inherit = false) {
        const Entry e = find(name);
        const std::string bytes = detail::read_file(root_ / e.path);
        if (content_hash(bytes) != e.hash)
            throw ValidationError("stale manifest: content of \"" + e.path +
                                  "\" no longer matches the recorded hash for \"" + name + "\"");
        const std::string mode = inherit ? "inherited" : "flat";
        const std::filesystem::path cache =
            root_ / "cache" /
            (e.hash + ".v" + std::string(kMetricSuiteVersion) + "." + mode + ".json");
        if (std::filesystem::exists(cache)) {
            try {
                return metric_report_from_json(detail::read_file(cache));
            } catch (const ParseError&) {
                // fall through and recompute
            }
        }
        Schema schema = parse_schema_file_bytes(bytes, root_ / e.path, name);
        if (inherit) schema = inherit_properties(schema);
        const MetricReport report = metric_report(schema);
        std::filesystem::create_directories(root_ / "cache");
        detail::write_file_atomic(cache, to_json(report).dump(2) + "\n");
        return report;
    }

private:
    static void check_name(const std::string& name) {
        if (name.empty()) throw ValidationError("schema name must not be empty");
        if (name.find('/') != std::string::npos || name.find('\\') != std::string::npos ||
            name.find("..") != std::string::npos)
            throw ValidationError("schema name \"" + name + "\" must not contain path separators");
    }

    Entry find(const std::string& name) const {
        for (const auto& e : read_manifest())
            if (e.name == name) return e;
        throw LookupError("corpus has no schema named \"" + name + "\"");
    }

    std::filesystem::path manifest_path() const { return root_ / "manifest.json"; }

    std::vector<Entry> read_manifest() const {
        if (!std::filesystem::exists(manifest_path())) return {};
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(detail::read_file(manifest_path()));
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("corrupt corpus manifest: ") + e.what());
        }
        std::vector<Entry> entries;
        try {
            for (const auto& s : doc.at("schemas"))
                entries.push_back({s.at("name").get<std::string>(),
                                   s.at("path").get<std::string>(),
                                   s.at("hash").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("corrupt corpus manifest: ") + e.what());
        }
        return entries;
    }

    void write_manifest(const std::vector<Entry>& entries) const {
        nlohmann::json doc;
        doc["schemas"] = nlohmann::json::array();
        for (const auto& e : entries)
            doc["schemas"].push_back({{"name", e.name}, {"path", e.path}, {"hash", e.hash}});
        detail::write_file_atomic(manifest_path(), doc.dump(2) + "\n");
    }

    std::filesystem::path root_;
};

} // namespace kbfocus
