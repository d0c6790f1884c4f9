#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lids {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A URI path segment was empty or otherwise unusable.
class InvalidName : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// TriG-star text could not be parsed.
class SyntaxError : public Error {
public:
    SyntaxError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// A pipeline script could not be parsed.
class ParseError : public Error {
public:
    ParseError(std::string pipeline_id, std::size_t line, const std::string& what)
        : Error(pipeline_id + ":" + std::to_string(line) + ": " + what),
          pipeline_id_(std::move(pipeline_id)),
          line_(line) {}

    const std::string& pipeline_id() const noexcept { return pipeline_id_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string pipeline_id_;
    std::size_t line_;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class InvalidQuery : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

}  // namespace lids
