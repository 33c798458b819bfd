#pragma once

#include <alsp/logic.hpp>

#include <string>
#include <string_view>

namespace alsp {

struct SourceSpec {
    std::string text;
    std::string origin; // file name or inline label
};

class ParseError : public Error {
public:
    ParseError(std::string message, std::string origin, std::size_t line, std::size_t column, std::string snippet);

    std::string message;
    std::string origin;
    std::size_t line   = 0;
    std::size_t column = 0;
    std::string snippet; // the offending source line
};

/// Parses lparse-style normal rules:
///
///     rule    := [atom] ":-" literal ("," literal)* "." | atom "."
///     literal := ["not"] atom | term "=" term
///     atom    := pred ["(" term ("," term)* ")"]
///
/// `%` starts a line comment. A predicate used with two arities is an error.
Program parse_program(const SourceSpec& src);

/// The canonical text of `p`: one rule per line.
std::string format_program(const Program& p);

/// Parses a single ground atom such as `attack(u1)`.
Atom parse_ground_atom(std::string_view text, std::string origin = "<atom>");

/// Reads a file and parses it; the file name becomes the origin.
Program parse_file(const std::string& path);

} // namespace alsp
