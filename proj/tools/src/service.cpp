#include "pgschema/app/service.hpp"

#include <charconv>
#include <mutex>

#include <nlohmann/json.hpp>

#include "pgschema/compat.hpp"
#include "pgschema/diff.hpp"
#include "pgschema/edit_json.hpp"
#include "pgschema/error.hpp"
#include "pgschema/refine.hpp"
#include "pgschema/schema_text.hpp"

namespace pgschema::app {

namespace {

using nlohmann::json;

HttpResponse reply(int status, const json& body) { return {status, body.dump(), "application/json"}; }

HttpResponse error_reply(int status, std::string_view message, json extra = json::object()) {
    extra["error"] = message;
    return reply(status, extra);
}

std::string_view code_name(SchemaError::Code code) {
    switch (code) {
    case SchemaError::Code::UnknownElement: return "unknown-element";
    case SchemaError::Code::DuplicateName: return "duplicate-name";
    case SchemaError::Code::Precondition: return "precondition";
    case SchemaError::Code::Integrity: return "integrity";
    case SchemaError::Code::Conflict: return "conflict";
    }
    return "error";
}

HttpResponse schema_error_reply(const SchemaError& e) {
    int status = e.code() == SchemaError::Code::UnknownElement ? 404 : 422;
    return error_reply(status, e.what(), {{"code", code_name(e.code())}});
}

HttpResponse load_error_reply(const GraphLoadError& e) {
    json problems = json::array();
    for (const auto& p : e.problems()) problems.push_back({{"line", p.line}, {"message", p.message}});
    return error_reply(422, "graph input rejected", {{"problems", problems}});
}

json report_json(const ConformanceReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations) {
        violations.push_back({{"element", v.element_id}, {"kind", to_string(v.kind)}, {"message", v.message}});
    }
    return {{"ok", report.ok()}, {"violations", violations}};
}

// Text, source map, graph model and the element ids that tie them together.
json schema_view(const SchemaGraph& schema) {
    auto serialized = serialize_schema(schema);
    json spans = json::array();
    for (const auto& s : serialized.spans) spans.push_back({{"id", s.element_id}, {"start", s.start}, {"end", s.end}});
    json elements = json::array();
    for (const auto& n : schema.node_types()) elements.push_back({{"id", n.id}, {"kind", "node"}, {"name", n.display_name()}});
    for (const auto& e : schema.edge_types())
        elements.push_back({{"id", e.id}, {"kind", "edge"}, {"name", schema.key_of(e).to_string()}});
    return {{"text", serialized.text}, {"spans", spans}, {"model", schema_to_json(schema)}, {"elements", elements}};
}

std::optional<json> parse_body(std::string_view body) {
    try {
        return json::parse(body.empty() ? std::string_view("{}") : body);
    } catch (const json::parse_error&) {
        return std::nullopt;
    }
}

std::optional<std::int64_t> parse_id(std::string_view text) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
    return v;
}

}  // namespace

SchemaGraph Service::head() const {
    std::shared_lock lock(mutex_);
    return workspace_.head();
}

HttpResponse Service::extract(std::string_view graph_text, const ExtractionOptions& options) {
    try {
        auto graph = load_graph_text(graph_text);
        auto schema = extract_schema(graph, options);
        auto report = validate_conformance(graph, schema, {options.open_world});
        std::unique_lock lock(mutex_);
        workspace_.set_head(schema);
        session_.last_report = report;
        auto view = schema_view(workspace_.head());
        view["report"] = report_json(report);
        return reply(200, view);
    } catch (const GraphLoadError& e) {
        return load_error_reply(e);
    } catch (const SchemaError& e) {
        return schema_error_reply(e);
    } catch (const WorkspaceError& e) {
        return error_reply(500, e.what());
    }
}

HttpResponse Service::validate(std::string_view graph_text, bool open_world) {
    try {
        auto graph = load_graph_text(graph_text);
        std::unique_lock lock(mutex_);
        auto report = validate_conformance(graph, workspace_.head(), {open_world});
        session_.last_report = report;
        return reply(200, report_json(report));
    } catch (const GraphLoadError& e) {
        return load_error_reply(e);
    }
}

HttpResponse Service::get_schema() const {
    std::shared_lock lock(mutex_);
    return reply(200, schema_view(workspace_.head()));
}

HttpResponse Service::put_schema(std::string_view text) {
    auto result = parse_schema(text);
    if (!result.ok()) {
        json errors = json::array();
        for (const auto& e : result.errors) {
            errors.push_back({{"line", e.line}, {"column", e.column}, {"message", e.message}, {"expected", e.expected}});
        }
        return error_reply(422, "schema text has errors", {{"errors", errors}});
    }
    try {
        std::unique_lock lock(mutex_);
        workspace_.set_head(std::move(*result.schema));
        return reply(200, schema_view(workspace_.head()));
    } catch (const WorkspaceError& e) {
        return error_reply(500, e.what());
    }
}

HttpResponse Service::post_edit(std::string_view body) {
    auto command = parse_body(body);
    if (!command) return error_reply(400, "request body is not valid JSON");
    try {
        auto edit = edit_from_json(*command);
        std::unique_lock lock(mutex_);
        const auto& before = workspace_.head();
        auto after = apply_edit(before, edit);
        auto diff = compute_diff(before, after);
        if (session_.guard_compat) {
            auto report = check_compat(diff);
            if (!report.compatible()) return reply(409, to_json(report));
        }
        workspace_.set_head(std::move(after));
        auto view = schema_view(workspace_.head());
        view["changes"] = render_semantic(diff);
        return reply(200, view);
    } catch (const SchemaError& e) {
        return schema_error_reply(e);
    } catch (const WorkspaceError& e) {
        return error_reply(500, e.what());
    }
}

HttpResponse Service::commit(std::string_view body) {
    auto request = parse_body(body);
    if (!request || !request->is_object()) return error_reply(400, "request body must be a JSON object");
    auto message = request->value("message", std::string());
    try {
        std::unique_lock lock(mutex_);
        const auto& v = workspace_.commit(message);
        return reply(201, {{"id", v.id}, {"message", v.message}, {"timestamp", v.timestamp}});
    } catch (const WorkspaceError& e) {
        return error_reply(500, e.what());
    }
}

HttpResponse Service::versions() const {
    std::shared_lock lock(mutex_);
    json out = json::array();
    for (const auto& v : workspace_.versions()) {
        out.push_back({{"id", v.id}, {"message", v.message}, {"timestamp", v.timestamp}});
    }
    return reply(200, {{"versions", out}});
}

HttpResponse Service::diff(std::string_view from, std::string_view to, std::string_view mode) const {
    auto a = parse_id(from);
    auto b = parse_id(to);
    if (!a || !b) return error_reply(400, "'from' and 'to' must be version ids");
    if (mode.empty()) mode = "semantic";
    std::shared_lock lock(mutex_);
    try {
        const auto& older = workspace_.version(*a).schema;
        const auto& newer = workspace_.version(*b).schema;
        auto d = compute_diff(older, newer);
        if (mode == "semantic") return reply(200, {{"mode", mode}, {"changes", render_semantic(d)}});
        if (mode == "raw") {
            return reply(200, {{"mode", mode},
                               {"lines", render_raw(serialize_schema(older).text, serialize_schema(newer).text)}});
        }
        if (mode == "visual") {
            return reply(200, {{"mode", mode}, {"annotations", to_json(annotate_visual(older, newer, d))},
                               {"records", to_json(d)}});
        }
        if (mode == "json") return reply(200, {{"mode", mode}, {"records", to_json(d)}});
        return error_reply(400, "mode must be semantic, raw, visual or json");
    } catch (const WorkspaceError& e) {
        return error_reply(404, e.what());
    }
}

HttpResponse Service::export_schema(std::string_view body) const {
    auto request = parse_body(body);
    if (!request || !request->is_object()) return error_reply(400, "request body must be a JSON object");
    auto format = parse_export_format(request->value("format", std::string("pgs")));
    if (!format) return error_reply(400, "format must be pgs or json");
    std::shared_lock lock(mutex_);
    json out = {{"format", request->value("format", std::string("pgs"))},
                {"content", export_text(workspace_.head(), *format)}};
    if (request->contains("path")) {
        try {
            auto path = request->at("path").get<std::string>();
            workspace_.export_head(*format, path);
            out["path"] = path;
        } catch (const WorkspaceError& e) {
            return error_reply(500, e.what());
        } catch (const json::exception&) {
            return error_reply(400, "'path' must be a string");
        }
    }
    return reply(200, out);
}

HttpResponse Service::get_settings() const {
    std::shared_lock lock(mutex_);
    return reply(200, {{"guardCompat", session_.guard_compat}});
}

HttpResponse Service::put_settings(std::string_view body) {
    auto request = parse_body(body);
    if (!request || !request->is_object() || !request->contains("guardCompat") || !(*request)["guardCompat"].is_boolean())
        return error_reply(400, "expected {\"guardCompat\": true|false}");
    std::unique_lock lock(mutex_);
    session_.guard_compat = (*request)["guardCompat"].get<bool>();
    return reply(200, {{"guardCompat", session_.guard_compat}});
}

}  // namespace pgschema::app
