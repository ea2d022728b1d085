#include "pgschema/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "pgschema/error.hpp"
#include "pgschema/schema.hpp"

namespace pgschema {

namespace {

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

bool parse_digits(std::string_view text, int& out) {
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    return ec == std::errc{} && ptr == text.data() + text.size();
}

bool looks_like_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

std::string format_problems(const std::vector<LoadProblem>& problems) {
    std::ostringstream out;
    out << "graph input rejected (" << problems.size() << " problem"
        << (problems.size() == 1 ? "" : "s") << ")";
    for (const auto& p : problems) out << "\n  line " << p.line << ": " << p.message;
    return out.str();
}

std::optional<PropertyValue> convert_value(const nlohmann::json& v, std::string& why) {
    switch (v.type()) {
    case nlohmann::json::value_t::string: {
        const auto& s = v.get_ref<const std::string&>();
        if (looks_like_date(s)) {
            if (auto d = Date::parse(s)) return PropertyValue{*d};
            why = "invalid calendar date '" + s + "'";
            return std::nullopt;
        }
        return PropertyValue{s};
    }
    case nlohmann::json::value_t::boolean:
        return PropertyValue{v.get<bool>()};
    case nlohmann::json::value_t::number_integer:
        return PropertyValue{v.get<std::int64_t>()};
    case nlohmann::json::value_t::number_unsigned: {
        auto u = v.get<std::uint64_t>();
        if (u <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max()))
            return PropertyValue{static_cast<std::int64_t>(u)};
        return PropertyValue{static_cast<double>(u)};
    }
    case nlohmann::json::value_t::number_float: {
        double d = v.get<double>();
        if (!std::isfinite(d)) {
            why = "non-finite number";
            return std::nullopt;
        }
        // -2^63 <= d < 2^63 fits in int64 exactly when integral.
        if (std::trunc(d) == d && d >= -9223372036854775808.0 && d < 9223372036854775808.0)
            return PropertyValue{static_cast<std::int64_t>(d)};
        return PropertyValue{d};
    }
    case nlohmann::json::value_t::null:
        why = "null values are not allowed (omit the key instead)";
        return std::nullopt;
    default:
        why = "nested objects and arrays are not allowed as property values";
        return std::nullopt;
    }
}

struct LineReader {
    std::vector<LoadProblem>& problems;
    std::size_t line;

    void fail(std::string message) { problems.push_back({line, std::move(message)}); }

    std::optional<std::string> id_field(const nlohmann::json& obj, const char* name) {
        auto it = obj.find(name);
        if (it == obj.end() || !it->is_string() || it->get_ref<const std::string&>().empty()) {
            fail(std::string("field '") + name + "' must be a non-empty string");
            return std::nullopt;
        }
        return it->get<std::string>();
    }

    std::optional<LabelSet> labels(const nlohmann::json& obj) {
        LabelSet out;
        auto it = obj.find("labels");
        if (it == obj.end()) return out;
        if (!it->is_array()) {
            fail("field 'labels' must be an array of strings");
            return std::nullopt;
        }
        for (const auto& l : *it) {
            if (!l.is_string()) {
                fail("field 'labels' must be an array of strings");
                return std::nullopt;
            }
            const auto& s = l.get_ref<const std::string&>();
            if (!is_identifier(s) || s == kUnlabeled) {
                fail("label '" + s + "' is not a valid identifier");
                return std::nullopt;
            }
            out.insert(s);
        }
        return out;
    }

    std::optional<PropertyMap> properties(const nlohmann::json& obj) {
        PropertyMap out;
        auto it = obj.find("properties");
        if (it == obj.end()) return out;
        if (!it->is_object()) {
            fail("field 'properties' must be an object");
            return std::nullopt;
        }
        bool good = true;
        for (const auto& [key, value] : it->items()) {
            if (!is_identifier(key)) {
                fail("property key '" + key + "' is not a valid identifier");
                good = false;
                continue;
            }
            std::string why;
            if (auto v = convert_value(value, why)) {
                out.emplace(key, std::move(*v));
            } else {
                fail("property '" + key + "': " + why);
                good = false;
            }
        }
        if (!good) return std::nullopt;
        return out;
    }
};

nlohmann::ordered_json value_to_json(const PropertyValue& value) {
    return std::visit(
        [](const auto& v) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Date>) {
                return v.to_string();
            } else {
                return v;
            }
        },
        value);
}

}  // namespace

GraphLoadError::GraphLoadError(std::vector<LoadProblem> problems)
    : Error(format_problems(problems)), problems_(std::move(problems)) {}

std::optional<Date> Date::parse(std::string_view text) {
    if (!looks_like_date(text)) return std::nullopt;
    Date d;
    if (!parse_digits(text.substr(0, 4), d.year) || !parse_digits(text.substr(5, 2), d.month) ||
        !parse_digits(text.substr(8, 2), d.day))
        return std::nullopt;
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        return std::nullopt;
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

ValueKind kind_of(const PropertyValue& value) {
    return static_cast<ValueKind>(value.index());
}

std::string display_name(const LabelSet& labels) {
    if (labels.empty()) return std::string(kUnlabeled);
    std::string out;
    for (const auto& l : labels) {
        if (!out.empty()) out += '&';
        out += l;
    }
    return out;
}

PropertyGraph::PropertyGraph(std::vector<GraphNode> nodes, std::vector<GraphEdge> edges)
    : nodes_(std::move(nodes)), edges_(std::move(edges)) {
    std::vector<LoadProblem> problems;
    auto by_id = [](const auto& a, const auto& b) { return a.id < b.id; };
    std::stable_sort(nodes_.begin(), nodes_.end(), by_id);
    std::stable_sort(edges_.begin(), edges_.end(), by_id);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id.empty()) problems.push_back({0, "node with empty id"});
        if (i > 0 && nodes_[i].id == nodes_[i - 1].id)
            problems.push_back({0, "duplicate node id '" + nodes_[i].id + "'"});
    }
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        const auto& e = edges_[i];
        if (e.id.empty()) problems.push_back({0, "edge with empty id"});
        if (i > 0 && e.id == edges_[i - 1].id)
            problems.push_back({0, "duplicate edge id '" + e.id + "'"});
        for (const auto* end : {&e.src, &e.dst}) {
            if (!find_node(*end))
                problems.push_back({0, "edge '" + e.id + "' references unknown node '" + *end + "'"});
        }
    }
    if (!problems.empty()) throw GraphLoadError(std::move(problems));
}

const GraphNode* PropertyGraph::find_node(std::string_view id) const {
    auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                               [](const GraphNode& n, std::string_view key) { return n.id < key; });
    return it != nodes_.end() && it->id == id ? &*it : nullptr;
}

PropertyGraph load_graph(std::istream& source) {
    std::vector<LoadProblem> problems;
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    std::unordered_map<std::string, std::size_t> node_lines;
    std::unordered_map<std::string, std::size_t> edge_lines;
    std::vector<std::size_t> edge_line_of;

    std::string text;
    std::size_t line_no = 0;
    while (std::getline(source, text)) {
        ++line_no;
        if (!text.empty() && text.back() == '\r') text.pop_back();
        if (text.find_first_not_of(" \t") == std::string::npos) continue;

        LineReader reader{problems, line_no};
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            reader.fail(std::string("malformed JSON: ") + e.what());
            continue;
        }
        if (!obj.is_object()) {
            reader.fail("expected a JSON object");
            continue;
        }
        auto kind = obj.find("kind");
        if (kind == obj.end() || !kind->is_string()) {
            reader.fail("missing 'kind' (expected \"node\" or \"edge\")");
            continue;
        }
        auto id = reader.id_field(obj, "id");
        auto labels = reader.labels(obj);
        auto props = reader.properties(obj);
        if (*kind == "node") {
            if (!id || !labels || !props) continue;
            if (auto [it, fresh] = node_lines.emplace(*id, line_no); !fresh) {
                reader.fail("duplicate node id '" + *id + "' (first defined on line " +
                            std::to_string(it->second) + ")");
                continue;
            }
            nodes.push_back({*id, std::move(*labels), std::move(*props)});
        } else if (*kind == "edge") {
            auto src = reader.id_field(obj, "src");
            auto dst = reader.id_field(obj, "dst");
            if (!id || !src || !dst || !labels || !props) continue;
            if (auto [it, fresh] = edge_lines.emplace(*id, line_no); !fresh) {
                reader.fail("duplicate edge id '" + *id + "' (first defined on line " +
                            std::to_string(it->second) + ")");
                continue;
            }
            edges.push_back({*id, *src, *dst, std::move(*labels), std::move(*props)});
            edge_line_of.push_back(line_no);
        } else {
            reader.fail("unknown kind '" + kind->dump() + "' (expected \"node\" or \"edge\")");
        }
    }

    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (const auto* end : {&edges[i].src, &edges[i].dst}) {
            if (!node_lines.count(*end)) {
                problems.push_back({edge_line_of[i], "edge '" + edges[i].id +
                                                         "' references unknown node '" + *end + "'"});
            }
        }
    }
    if (!problems.empty()) {
        std::stable_sort(problems.begin(), problems.end(),
                         [](const auto& a, const auto& b) { return a.line < b.line; });
        throw GraphLoadError(std::move(problems));
    }
    return PropertyGraph(std::move(nodes), std::move(edges));
}

PropertyGraph load_graph_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return load_graph(in);
}

PropertyGraph FileGraphSource::read() {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error("cannot read " + path_.string());
    return load_graph(in);
}

std::string dump_graph(const PropertyGraph& graph) {
    std::string out;
    auto emit = [&out](const auto& element, bool is_edge) {
        nlohmann::ordered_json obj;
        obj["kind"] = is_edge ? "edge" : "node";
        obj["id"] = element.id;
        if constexpr (std::is_same_v<std::decay_t<decltype(element)>, GraphEdge>) {
            obj["src"] = element.src;
            obj["dst"] = element.dst;
        }
        obj["labels"] = nlohmann::ordered_json::array();
        for (const auto& l : element.labels) obj["labels"].push_back(l);
        obj["properties"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : element.properties) obj["properties"][k] = value_to_json(v);
        out += obj.dump();
        out += '\n';
    };
    for (const auto& n : graph.nodes()) emit(n, false);
    for (const auto& e : graph.edges()) emit(e, true);
    return out;
}

}  // namespace pgschema
