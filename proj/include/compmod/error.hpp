#pragma once

#include <stdexcept>
#include <string>

namespace compmod {

// Base for every error raised by the library. `kind` is a stable tag
// (e.g. "UnbalancedParenthesis") that tests and the CLI can key on.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

// Parse-level error carrying a byte offset and 1-based line.
class ParseError : public Error {
public:
    ParseError(std::string kind, const std::string& msg, std::size_t pos, int line)
        : Error(std::move(kind), msg + " at line " + std::to_string(line)),
          pos_(pos), line_(line) {}
    std::size_t position() const noexcept { return pos_; }
    int line() const noexcept { return line_; }

private:
    std::size_t pos_;
    int line_;
};

} // namespace compmod
