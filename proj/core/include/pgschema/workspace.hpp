#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pgschema/diff.hpp"
#include "pgschema/schema.hpp"

namespace pgschema {

struct Version {
    std::int64_t id = 0;
    std::string message;
    std::int64_t timestamp = 0;  // UTC seconds
    SchemaGraph schema;
};

enum class ExportFormat { Pgs, Json };

std::optional<ExportFormat> parse_export_format(std::string_view text);

// JSON rendering of a schema: {"nodeTypes":[...],"edgeTypes":[...]}.
nlohmann::json schema_to_json(const SchemaGraph& schema);

// Append-only version store rooted at a directory:
//   <root>/index.json          {"versions":[{"id","message","timestamp"}]}
//   <root>/versions/<id>.pgs   canonical text of each version
//   <root>/head.pgs            working schema
// One writer per workspace; callers serialize mutations.
class Workspace {
public:
    // Opens or initializes a workspace. A missing or empty directory yields an
    // empty history and an empty head. Throws WorkspaceError on a corrupt
    // index or unreadable version file.
    static Workspace load(const std::filesystem::path& root);

    const std::filesystem::path& root() const noexcept { return root_; }
    const std::vector<Version>& versions() const noexcept { return versions_; }
    const SchemaGraph& head() const noexcept { return head_; }

    const Version& version(std::int64_t id) const;  // throws WorkspaceError

    // Replaces and persists the head.
    void set_head(SchemaGraph schema);

    // Appends the head as a new version; ids are dense from 1.
    const Version& commit(std::string message);
    const Version& commit(std::string message, std::int64_t timestamp);

    SchemaDiff diff_versions(std::int64_t from, std::int64_t to) const;

    // Writes head and index; commit and set_head already do this.
    void save() const;

    void export_head(ExportFormat format, const std::filesystem::path& path) const;

private:
    explicit Workspace(std::filesystem::path root) : root_(std::move(root)) {}

    void write_index() const;
    void write_head() const;

    std::filesystem::path root_;
    std::vector<Version> versions_;
    SchemaGraph head_;
};

std::string export_text(const SchemaGraph& schema, ExportFormat format);

}  // namespace pgschema
