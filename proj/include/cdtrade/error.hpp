#pragma once

#include <stdexcept>
#include <string>

namespace cdtrade {

/// Raised whenever an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// A text document (channel, distortion, design, options) failed to parse.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& source, std::size_t line, const std::string& what)
        : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A requested computation would exceed a configured resource cap.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

}  // namespace detail
}  // namespace cdtrade
