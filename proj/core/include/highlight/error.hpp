#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace highlight {

// Base class for every validation or I/O failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A record in a JSONL input could not be accepted. Carries the 1-based line.
class ParseError : public Error {
public:
    ParseError(std::string source, std::size_t line, const std::string& what);

    const std::string& source() const noexcept { return source_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

}  // namespace highlight
