#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pgschema {

// Calendar date, always a valid proleptic Gregorian day.
struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    static std::optional<Date> parse(std::string_view text);
    std::string to_string() const;

    friend auto operator<=>(const Date&, const Date&) = default;
};

enum class ValueKind { String, Integer, Float, Boolean, Date };

using PropertyValue = std::variant<std::string, std::int64_t, double, bool, Date>;
using PropertyMap = std::map<std::string, PropertyValue>;
using LabelSet = std::set<std::string>;

ValueKind kind_of(const PropertyValue& value);

// Label set display form: labels joined by '&' in sorted order, or
// `_Unlabeled` for the empty set.
inline constexpr std::string_view kUnlabeled = "_Unlabeled";
std::string display_name(const LabelSet& labels);

struct GraphNode {
    std::string id;
    LabelSet labels;
    PropertyMap properties;

    friend bool operator==(const GraphNode&, const GraphNode&) = default;
};

struct GraphEdge {
    std::string id;
    std::string src;
    std::string dst;
    LabelSet labels;
    PropertyMap properties;

    friend bool operator==(const GraphEdge&, const GraphEdge&) = default;
};

// Immutable, referentially valid property graph. Nodes and edges are kept
// sorted by id so that the value does not depend on construction order.
class PropertyGraph {
public:
    PropertyGraph() = default;

    // Throws GraphLoadError on duplicate ids or dangling edge endpoints.
    PropertyGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges);

    const std::vector<GraphNode>& nodes() const noexcept { return nodes_; }
    const std::vector<GraphEdge>& edges() const noexcept { return edges_; }

    const GraphNode* find_node(std::string_view id) const;

    friend bool operator==(const PropertyGraph&, const PropertyGraph&) = default;

private:
    std::vector<GraphNode> nodes_;
    std::vector<GraphEdge> edges_;
};

// Reads the line-oriented JSON graph format. All problems (malformed lines,
// duplicate ids, unknown endpoints) are collected and thrown together as a
// GraphLoadError.
PropertyGraph load_graph(std::istream& source);
PropertyGraph load_graph_text(std::string_view text);

// Inverse of load_graph, one object per line in id order (nodes first).
std::string dump_graph(const PropertyGraph& graph);

// Origin of instance data. Files are the only source; a database connector
// would be another implementation.
class GraphSource {
public:
    virtual ~GraphSource() = default;
    virtual PropertyGraph read() = 0;
};

class FileGraphSource : public GraphSource {
public:
    explicit FileGraphSource(std::filesystem::path path) : path_(std::move(path)) {}

    // Throws Error when the file cannot be opened, GraphLoadError on bad content.
    PropertyGraph read() override;

private:
    std::filesystem::path path_;
};

}  // namespace pgschema
