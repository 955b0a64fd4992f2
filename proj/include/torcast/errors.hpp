#pragma once

#include <stdexcept>
#include <string>

namespace torcast {

// Error taxonomy used for CLI exit-code classes: argument (2), data/config (3),
// endpoint (4). Everything derives from std::runtime_error so callers that do
// not care about the class can catch one type.

class ArgumentError : public std::runtime_error {
public:
    explicit ArgumentError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

class GeometryError : public std::runtime_error {
public:
    explicit GeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

class EndpointError : public std::runtime_error {
public:
    explicit EndpointError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace torcast
