#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace pgschema {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised by schema construction and every schema transformation.
class SchemaError : public Error {
public:
    enum class Code {
        UnknownElement,
        DuplicateName,
        Precondition,
        Integrity,
        Conflict,
    };

    SchemaError(Code code, const std::string& message) : Error(message), code_(code) {}

    Code code() const noexcept { return code_; }

private:
    Code code_;
};

struct LoadProblem {
    std::size_t line = 0;  // 1-based
    std::string message;
};

// Graph ingestion collects every problem before rejecting the input.
class GraphLoadError : public Error {
public:
    explicit GraphLoadError(std::vector<LoadProblem> problems);

    const std::vector<LoadProblem>& problems() const noexcept { return problems_; }

private:
    std::vector<LoadProblem> problems_;
};

class WorkspaceError : public Error {
public:
    using Error::Error;
};

}  // namespace pgschema
