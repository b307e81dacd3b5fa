#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rainrule {

enum class Errc {
    parse,
    unsupported_format,
    io,
    empty_selection,
    insufficient_data,
    degenerate_fit,
    empty_curve,
    singular_fit,
    invalid_scenario,
    degenerate_curve,
    incomplete_family,
};

const char* to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Position is 1-based for line, 0-based for byte offset.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t byte)
        : Error(Errc::parse, what), line_(line), byte_(byte) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t byte() const noexcept { return byte_; }

private:
    std::size_t line_;
    std::size_t byte_;
};

}  // namespace rainrule
