#pragma once

#include <stdexcept>
#include <string>

namespace hhs {

// Every module error carries a short kind tag (NotMedian, Untrusted, ...)
// which the CLI prints verbatim.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

class ParseError : public Error {
public:
    ParseError(int line, const std::string& msg)
        : Error("ParseError", "line " + std::to_string(line) + ": " + msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
    throw Error(kind, msg);
}

} // namespace hhs
