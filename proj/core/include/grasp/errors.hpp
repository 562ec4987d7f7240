#pragma once

#include <stdexcept>
#include <string>

namespace grasp {

// Base for everything thrown by this library. The CLI maps the concrete
// types below to distinct exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration (bad JSON, out-of-range hyperparameter, ...).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(what) {}
};

// Unreadable or malformed input data (dataset trees, annotation files, ...).
class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(what) {}
};

// Syntax-level failure while parsing a specific file.
class FormatError : public DataError {
public:
    explicit FormatError(const std::string& what) : DataError(what) {}
};

// Training was aborted (non-finite loss or gradient).
class TrainAbort : public Error {
public:
    explicit TrainAbort(const std::string& what) : Error(what) {}
};

} // namespace grasp
