#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>

#include "pgschema/conformance.hpp"
#include "pgschema/extractor.hpp"
#include "pgschema/workspace.hpp"

namespace httplib {
class Server;
}

namespace pgschema::app {

struct HttpResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

struct SessionState {
    bool guard_compat = false;
    std::optional<ConformanceReport> last_report;
};

// Backend of the HTTP API. Each handler maps one request to one response and
// adds no semantics beyond the library calls it makes. Mutations of the
// workspace are serialized; a rejected request leaves the head untouched.
class Service {
public:
    explicit Service(Workspace workspace) : workspace_(std::move(workspace)) {}

    HttpResponse extract(std::string_view graph_text, const ExtractionOptions& options);
    HttpResponse validate(std::string_view graph_text, bool open_world);
    HttpResponse get_schema() const;
    HttpResponse put_schema(std::string_view text);
    HttpResponse post_edit(std::string_view body);
    HttpResponse commit(std::string_view body);
    HttpResponse versions() const;
    HttpResponse diff(std::string_view from, std::string_view to, std::string_view mode) const;
    HttpResponse export_schema(std::string_view body) const;
    HttpResponse get_settings() const;
    HttpResponse put_settings(std::string_view body);

    // Registers every endpoint on `server`; the service must outlive it.
    void mount(httplib::Server& server);

    SchemaGraph head() const;

private:
    mutable std::shared_mutex mutex_;
    Workspace workspace_;
    SessionState session_;
};

// Blocks serving on host:port until the process is stopped. Returns non-zero
// when the port cannot be bound.
int serve(const std::filesystem::path& root, const std::string& host, int port);

}  // namespace pgschema::app
