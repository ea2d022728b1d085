#include "pgschema/workspace.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "pgschema/error.hpp"
#include "pgschema/schema_text.hpp"

namespace pgschema {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw WorkspaceError("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

// Writes through a temporary file so readers never see a partial file.
void write_file(const fs::path& path, std::string_view content) {
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw WorkspaceError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw WorkspaceError("cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out.flush()) throw WorkspaceError("cannot write " + path.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw WorkspaceError("cannot write " + path.string());
    }
}

SchemaGraph read_schema(const fs::path& path) {
    auto result = parse_schema(read_file(path));
    if (!result.ok()) {
        throw WorkspaceError("corrupt schema file " + path.string() + ": " + result.errors.front().to_string());
    }
    return std::move(*result.schema);
}

fs::path version_path(const fs::path& root, std::int64_t id) {
    return root / "versions" / (std::to_string(id) + ".pgs");
}

json card_json(const Cardinality& c) { return json::array({c.min, c.max ? json(*c.max) : json(nullptr)}); }

json props_json(std::vector<PropertyDef> props) {
    std::sort(props.begin(), props.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
    json out = json::array();
    for (const auto& p : props) out.push_back({{"name", p.name}, {"type", to_string(p.type)}, {"required", p.required}});
    return out;
}

std::int64_t now_seconds() {
    return std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch())
        .count();
}

}  // namespace

std::optional<ExportFormat> parse_export_format(std::string_view text) {
    if (text == "pgs") return ExportFormat::Pgs;
    if (text == "json") return ExportFormat::Json;
    return std::nullopt;
}

json schema_to_json(const SchemaGraph& input) {
    auto schema = canonicalize(input);
    json nodes = json::array();
    for (const auto& n : schema.node_types()) {
        nodes.push_back({{"labels", n.labels},
                         {"supertype", n.supertype ? json(schema.node_name(*n.supertype)) : json(nullptr)},
                         {"properties", props_json(n.properties)}});
    }
    json edges = json::array();
    for (const auto& e : schema.edge_types()) {
        edges.push_back({{"label", e.label()},
                         {"src", schema.node_name(e.src)},
                         {"dst", schema.node_name(e.dst)},
                         {"outCard", card_json(e.out_card)},
                         {"inCard", card_json(e.in_card)},
                         {"properties", props_json(e.properties)}});
    }
    return {{"nodeTypes", nodes}, {"edgeTypes", edges}};
}

std::string export_text(const SchemaGraph& schema, ExportFormat format) {
    if (format == ExportFormat::Pgs) return serialize_schema(schema).text;
    return schema_to_json(schema).dump(2) + "\n";
}

Workspace Workspace::load(const fs::path& root) {
    Workspace w(root);
    const auto index_path = root / "index.json";
    if (fs::exists(index_path)) {
        json index;
        try {
            index = json::parse(read_file(index_path));
        } catch (const json::exception& e) {
            throw WorkspaceError("corrupt index " + index_path.string() + ": " + e.what());
        }
        if (!index.is_object() || !index.contains("versions") || !index["versions"].is_array())
            throw WorkspaceError("corrupt index " + index_path.string() + ": missing 'versions' array");
        for (const auto& entry : index["versions"]) {
            Version v;
            try {
                v.id = entry.at("id").get<std::int64_t>();
                v.message = entry.at("message").get<std::string>();
                v.timestamp = entry.at("timestamp").get<std::int64_t>();
            } catch (const json::exception& e) {
                throw WorkspaceError("corrupt index " + index_path.string() + ": " + e.what());
            }
            if (v.id != static_cast<std::int64_t>(w.versions_.size()) + 1)
                throw WorkspaceError("corrupt index " + index_path.string() + ": version ids are not dense from 1");
            const auto file = version_path(root, v.id);
            if (!fs::exists(file))
                throw WorkspaceError("corrupt index " + index_path.string() + ": missing version file " + file.string());
            v.schema = read_schema(file);
            w.versions_.push_back(std::move(v));
        }
    }
    if (fs::exists(root / "head.pgs")) {
        w.head_ = read_schema(root / "head.pgs");
    } else if (!w.versions_.empty()) {
        w.head_ = w.versions_.back().schema;
    }
    return w;
}

const Version& Workspace::version(std::int64_t id) const {
    if (id < 1 || id > static_cast<std::int64_t>(versions_.size()))
        throw WorkspaceError("unknown version " + std::to_string(id));
    return versions_[static_cast<std::size_t>(id - 1)];
}

void Workspace::set_head(SchemaGraph schema) {
    head_ = std::move(schema);
    write_head();
}

const Version& Workspace::commit(std::string message) { return commit(std::move(message), now_seconds()); }

const Version& Workspace::commit(std::string message, std::int64_t timestamp) {
    Version v{static_cast<std::int64_t>(versions_.size()) + 1, std::move(message), timestamp, head_};
    write_file(version_path(root_, v.id), serialize_schema(v.schema).text);
    versions_.push_back(std::move(v));
    try {
        write_index();
        write_head();
    } catch (...) {
        versions_.pop_back();
        throw;
    }
    return versions_.back();
}

SchemaDiff Workspace::diff_versions(std::int64_t from, std::int64_t to) const {
    return compute_diff(version(from).schema, version(to).schema);
}

void Workspace::save() const {
    write_index();
    write_head();
}

void Workspace::export_head(ExportFormat format, const fs::path& path) const {
    write_file(path, export_text(head_, format));
}

void Workspace::write_index() const {
    json versions = json::array();
    for (const auto& v : versions_) {
        versions.push_back({{"id", v.id}, {"message", v.message}, {"timestamp", v.timestamp}});
    }
    write_file(root_ / "index.json", json{{"versions", versions}}.dump(2) + "\n");
}

void Workspace::write_head() const { write_file(root_ / "head.pgs", serialize_schema(head_).text); }

}  // namespace pgschema
