#pragma once

#include <filesystem>
#include <string>

#include "pgschema/schema.hpp"

namespace pgschema::testing {

// Contents of a file under tests/data.
std::string data_file(const std::string& name);
std::filesystem::path data_path(const std::string& name);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

// Two Person nodes, only one with a parking spot.
inline constexpr const char* kParkingGraph =
    R"({"kind":"node","id":"p1","labels":["Person"],"properties":{"name":"Ada","parkingSpot":"A3"}})" "\n"
    R"({"kind":"node","id":"p2","labels":["Person"],"properties":{"name":"Grace"}})" "\n";

// Fresh directory removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

SchemaGraph schema_from(const std::string& text);

}  // namespace pgschema::testing
