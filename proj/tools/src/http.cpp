#include <iostream>

#include <httplib.h>

#include "pgschema/app/service.hpp"
#include "pgschema/error.hpp"

namespace pgschema::app {

namespace {

void send(httplib::Response& res, const HttpResponse& r) {
    res.status = r.status;
    res.set_content(r.body, r.content_type);
}

bool flag_param(const httplib::Request& req, const std::string& name, bool fallback) {
    std::string value;
    if (req.has_param(name)) {
        value = req.get_param_value(name);
    } else if (req.has_file(name)) {
        value = req.get_file_value(name).content;
    } else {
        return fallback;
    }
    return value == "true" || value == "1";
}

std::string graph_body(const httplib::Request& req) {
    if (req.is_multipart_form_data() && req.has_file("graph")) return req.get_file_value("graph").content;
    return req.body;
}

}  // namespace

void Service::mount(httplib::Server& server) {
    server.Post("/extract", [this](const httplib::Request& req, httplib::Response& res) {
        ExtractionOptions options;
        options.infer_cardinality = flag_param(req, "inferCardinality", true);
        options.infer_subtypes = flag_param(req, "inferSubtypes", false);
        options.open_world = flag_param(req, "openWorld", false);
        send(res, extract(graph_body(req), options));
    });
    server.Post("/validate", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, validate(graph_body(req), flag_param(req, "openWorld", false)));
    });
    server.Get("/schema", [this](const httplib::Request&, httplib::Response& res) { send(res, get_schema()); });
    server.Put("/schema", [this](const httplib::Request& req, httplib::Response& res) { send(res, put_schema(req.body)); });
    server.Post("/edits", [this](const httplib::Request& req, httplib::Response& res) { send(res, post_edit(req.body)); });
    server.Post("/commit", [this](const httplib::Request& req, httplib::Response& res) { send(res, commit(req.body)); });
    server.Get("/versions", [this](const httplib::Request&, httplib::Response& res) { send(res, versions()); });
    server.Get("/diff", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, diff(req.get_param_value("from"), req.get_param_value("to"), req.get_param_value("mode")));
    });
    server.Post("/export", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, export_schema(req.body));
    });
    server.Get("/settings", [this](const httplib::Request&, httplib::Response& res) { send(res, get_settings()); });
    server.Put("/settings", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, put_settings(req.body));
    });
}

int serve(const std::filesystem::path& root, const std::string& host, int port) {
    Service service(Workspace::load(root));
    httplib::Server server;
    service.mount(server);
    if (!server.bind_to_port(host, port)) {
        std::cerr << "cannot bind " << host << ":" << port << "\n";
        return 1;
    }
    std::cerr << "serving " << root << " on http://" << host << ":" << port << "\n";
    return server.listen_after_bind() ? 0 : 1;
}

}  // namespace pgschema::app
