#include "pgschema/app/cli.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pgschema/app/service.hpp"
#include "pgschema/compat.hpp"
#include "pgschema/conformance.hpp"
#include "pgschema/diff.hpp"
#include "pgschema/edit_json.hpp"
#include "pgschema/error.hpp"
#include "pgschema/extractor.hpp"
#include "pgschema/refine.hpp"
#include "pgschema/schema_text.hpp"
#include "pgschema/workspace.hpp"

namespace pgschema::app {

namespace {

using nlohmann::json;

class InputError : public Error {
public:
    using Error::Error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_text(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out || !out.write(text.data(), static_cast<std::streamsize>(text.size())))
        throw InputError("cannot write " + path);
}

SchemaGraph read_schema(const std::string& path) {
    auto result = parse_schema(read_text(path));
    if (!result.ok()) {
        std::string message = path + ": " + std::to_string(result.errors.size()) + " parse error(s)";
        for (const auto& e : result.errors) message += "\n  " + path + ":" + e.to_string();
        throw InputError(message);
    }
    return std::move(*result.schema);
}

PropertyGraph read_graph(const std::string& path) { return FileGraphSource(path).read(); }

json report_json(const ConformanceReport& report) {
    json violations = json::array();
    for (const auto& v : report.violations)
        violations.push_back({{"element", v.element_id}, {"kind", to_string(v.kind)}, {"message", v.message}});
    return {{"ok", report.ok()}, {"violations", violations}};
}

struct Options {
    std::string graph;
    std::string schema;
    std::string out;
    std::string workspace;
    std::string edit_json;
    std::string message;
    std::string format = "pgs";
    std::string host = "127.0.0.1";
    std::vector<std::string> files;
    std::int64_t from = 0;
    std::int64_t to = 0;
    int port = 8080;
    bool subtypes = false;
    bool no_cardinality = false;
    bool open_world = false;
    bool check = false;
    bool check_compat = false;
    bool semantic = false;
    bool raw = false;
    bool visual = false;
    bool as_json = false;
};

int cmd_extract(const Options& o, std::ostream& out) {
    ExtractionOptions options;
    options.infer_cardinality = !o.no_cardinality;
    options.infer_subtypes = o.subtypes;
    auto schema = extract_schema(read_graph(o.graph), options);
    auto text = serialize_schema(schema).text;
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
        out << json{{"out", o.out},
                    {"nodeTypes", schema.node_types().size()},
                    {"edgeTypes", schema.edge_types().size()}}
                   .dump()
            << "\n";
    }
    return kExitOk;
}

int cmd_validate(const Options& o, std::ostream& out) {
    auto report = validate_conformance(read_graph(o.graph), read_schema(o.schema), {o.open_world});
    out << report_json(report).dump(2) << "\n";
    return report.ok() ? kExitOk : kExitCheckFailed;
}

int cmd_fmt(const Options& o, std::ostream& out) {
    const auto original = read_text(o.files.front());
    auto result = parse_schema(original);
    if (!result.ok()) read_schema(o.files.front());  // throws with positions
    auto text = serialize_schema(*result.schema).text;
    if (o.check) {
        bool same = text == original;
        out << (same ? "formatted" : "needs formatting") << ": " << o.files.front() << "\n";
        return same ? kExitOk : kExitCheckFailed;
    }
    if (text != original) write_text(o.files.front(), text);
    return kExitOk;
}

int cmd_edit(const Options& o, std::ostream& out) {
    const auto& path = o.files.front();
    auto before = read_schema(path);
    json command;
    try {
        command = json::parse(o.edit_json);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("--json is not valid JSON: ") + e.what());
    }
    auto after = apply_edit(before, edit_from_json(command));
    auto diff = compute_diff(before, after);
    if (o.check_compat) {
        auto report = check_compat(diff);
        if (!report.compatible()) {
            out << to_json(report).dump(2) << "\n";
            return kExitIncompatible;
        }
    }
    write_text(o.out.empty() ? path : o.out, serialize_schema(after).text);
    for (const auto& line : render_semantic(diff)) out << line << "\n";
    return kExitOk;
}

int cmd_diff(const Options& o, std::ostream& out) {
    SchemaGraph before;
    SchemaGraph after;
    if (!o.workspace.empty()) {
        auto w = Workspace::load(o.workspace);
        before = w.version(o.from).schema;
        after = w.version(o.to).schema;
    } else {
        if (o.files.size() != 2) throw CLI::ValidationError("diff", "expects two schema files or --workspace");
        before = read_schema(o.files[0]);
        after = read_schema(o.files[1]);
    }
    auto diff = compute_diff(before, after);
    if (o.raw) {
        for (const auto& line : render_raw(serialize_schema(before).text, serialize_schema(after).text))
            out << line << "\n";
    } else if (o.visual) {
        out << to_json(annotate_visual(before, after, diff)).dump(2) << "\n";
    } else if (o.as_json) {
        out << to_json(diff).dump(2) << "\n";
    } else {
        for (const auto& line : render_semantic(diff)) out << line << "\n";
    }
    if (o.check_compat && !check_compat(diff).compatible()) return kExitIncompatible;
    return kExitOk;
}

int cmd_commit(const Options& o, std::ostream& out) {
    auto w = Workspace::load(o.workspace);
    if (!o.schema.empty()) w.set_head(read_schema(o.schema));
    const auto& v = w.commit(o.message);
    out << json{{"id", v.id}, {"message", v.message}, {"timestamp", v.timestamp}}.dump() << "\n";
    return kExitOk;
}

int cmd_log(const Options& o, std::ostream& out) {
    auto w = Workspace::load(o.workspace);
    if (o.as_json) {
        json versions = json::array();
        for (const auto& v : w.versions())
            versions.push_back({{"id", v.id}, {"message", v.message}, {"timestamp", v.timestamp}});
        out << json{{"versions", versions}}.dump(2) << "\n";
        return kExitOk;
    }
    for (const auto& v : w.versions()) out << v.id << "\t" << v.timestamp << "\t" << v.message << "\n";
    return kExitOk;
}

int cmd_export(const Options& o, std::ostream& out) {
    auto format = parse_export_format(o.format);
    if (!format) throw CLI::ValidationError("--format", "must be pgs or json");
    SchemaGraph schema;
    if (!o.schema.empty()) {
        schema = read_schema(o.schema);
    } else if (!o.workspace.empty()) {
        schema = Workspace::load(o.workspace).head();
    } else {
        throw CLI::ValidationError("export", "needs --schema or --workspace");
    }
    auto text = export_text(schema, *format);
    if (o.out.empty()) {
        out << text;
    } else {
        write_text(o.out, text);
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Property graph schema tool: extract, refine, diff and version schemas"};
    app.require_subcommand(1);
    Options o;

    auto* extract = app.add_subcommand("extract", "Extract a schema from a JSON-lines graph");
    extract->add_option("--graph", o.graph, "Graph file (JSON lines)")->required();
    extract->add_option("--out", o.out, "Write the schema here instead of stdout");
    extract->add_flag("--subtypes", o.subtypes, "Infer supertype links from label subsets");
    extract->add_flag("--no-cardinality", o.no_cardinality, "Keep edge cardinalities at 0..*");

    auto* validate = app.add_subcommand("validate", "Check a graph against a schema");
    validate->add_option("--graph", o.graph, "Graph file (JSON lines)")->required();
    validate->add_option("--schema", o.schema, "Schema file (.pgs)")->required();
    validate->add_flag("--open-world", o.open_world, "Tolerate undeclared properties");

    auto* fmt = app.add_subcommand("fmt", "Rewrite a .pgs file in canonical form");
    fmt->add_option("file", o.files, "Schema file")->required()->expected(1);
    fmt->add_flag("--check", o.check, "Only report whether the file is canonical");

    auto* edit = app.add_subcommand("edit", "Apply one refinement command to a .pgs file");
    edit->add_option("file", o.files, "Schema file")->required()->expected(1);
    edit->add_option("--json", o.edit_json, "Edit command as JSON")->required();
    edit->add_option("--out", o.out, "Write the result here instead of in place");
    edit->add_flag("--check-compat", o.check_compat, "Refuse backwards-incompatible edits (exit 3)");

    auto* diff = app.add_subcommand("diff", "Compare two schemas");
    diff->add_option("files", o.files, "Old and new schema files")->expected(0, 2);
    diff->add_option("--workspace", o.workspace, "Compare committed versions of a workspace");
    diff->add_option("--from", o.from, "Older version id");
    diff->add_option("--to", o.to, "Newer version id");
    auto* semantic = diff->add_flag("--semantic", o.semantic, "Sentences, one per change (default)");
    auto* raw = diff->add_flag("--raw", o.raw, "Line diff of the canonical texts");
    auto* visual = diff->add_flag("--visual", o.visual, "Per-type status and symbol");
    auto* as_json = diff->add_flag("--json", o.as_json, "Change records as JSON");
    semantic->excludes(raw)->excludes(visual)->excludes(as_json);
    raw->excludes(visual)->excludes(as_json);
    visual->excludes(as_json);
    diff->add_flag("--check-compat", o.check_compat, "Exit 3 when the change is backwards-incompatible");

    auto* commit = app.add_subcommand("commit", "Record the workspace head as a new version");
    commit->add_option("--workspace", o.workspace, "Workspace directory")->required();
    commit->add_option("-m,--message", o.message, "Commit message")->required();
    commit->add_option("--schema", o.schema, "Replace the head with this file first");

    auto* log = app.add_subcommand("log", "List committed versions");
    log->add_option("--workspace", o.workspace, "Workspace directory")->required();
    log->add_flag("--json", o.as_json, "Print JSON");

    auto* exp = app.add_subcommand("export", "Write a schema as .pgs text or JSON");
    exp->add_option("--workspace", o.workspace, "Export the workspace head");
    exp->add_option("--schema", o.schema, "Export this schema file");
    exp->add_option("--format", o.format, "pgs or json")->check(CLI::IsMember({"pgs", "json"}));
    exp->add_option("--out", o.out, "Output path (stdout when omitted)");

    auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP API over a workspace");
    serve_cmd->add_option("--workspace", o.workspace, "Workspace directory")->required();
    serve_cmd->add_option("--host", o.host, "Bind address");
    serve_cmd->add_option("--port", o.port, "Port");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (extract->parsed()) return cmd_extract(o, out);
        if (validate->parsed()) return cmd_validate(o, out);
        if (fmt->parsed()) return cmd_fmt(o, out);
        if (edit->parsed()) return cmd_edit(o, out);
        if (diff->parsed()) return cmd_diff(o, out);
        if (commit->parsed()) return cmd_commit(o, out);
        if (log->parsed()) return cmd_log(o, out);
        if (exp->parsed()) return cmd_export(o, out);
        if (serve_cmd->parsed()) return serve(o.workspace, o.host, o.port) == 0 ? kExitOk : kExitInput;
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    }
    return kExitUsage;
}

}  // namespace pgschema::app
