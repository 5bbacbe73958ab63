#pragma once

#include <stdexcept>
#include <string>

namespace hcrep {

// Caller broke a documented precondition. Maps to CLI exit code 4.
struct ContractViolation : std::logic_error {
    explicit ContractViolation(const std::string& what) : std::logic_error(what) {}
};

// Anything wrong with input data. Maps to CLI exit code 3.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : DataError {
    explicit ParseError(const std::string& what) : DataError(what) {}
};

struct SchemaError : DataError {
    explicit SchemaError(const std::string& what) : DataError(what) {}
};

struct ValidationError : DataError {
    explicit ValidationError(const std::string& what) : DataError(what) {}
};

struct IoError : DataError {
    explicit IoError(const std::string& what) : DataError(what) {}
};

// Bad run configuration (flags, option combinations). Maps to CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace hcrep
