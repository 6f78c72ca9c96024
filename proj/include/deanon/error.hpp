#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deanon {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

class SelfLoopError : public Error {
public:
    using Error::Error;
};

class UnknownNodeError : public Error {
public:
    using Error::Error;
};

/// Raised when a rejection sampler cannot find enough admissible pairs.
class SamplingError : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    ParseError(std::string const& path, std::size_t line, std::string const& what)
        : Error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class MissingArtifactError : public Error {
public:
    explicit MissingArtifactError(std::string const& artifact)
        : Error("missing artifact: " + artifact), artifact_(artifact) {}

    std::string const& artifact() const { return artifact_; }

private:
    std::string artifact_;
};

}  // namespace deanon
