#pragma once

#include "epostar/term.hpp"

#include <set>
#include <string>

namespace epostar {

/// Syntax or well-formedness error in a TRS / term input, with position.
class ParseError : public Error {
public:
    ParseError(std::string msg, int line, int col)
        : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
          line_(line),
          col_(col) {}
    int line() const { return line_; }
    int column() const { return col_; }

private:
    int line_;
    int col_;
};

/// Parses the `(VAR ...) (RULES ...) (COMMENT ...)` exchange format.
/// Defined symbols and arities are inferred from use; see term.hpp invariants.
Trs parse_trs(const std::string& text);

/// Parses a single term over an existing signature. Identifiers listed in
/// `vars` are variables, everything else must name a signature symbol.
Term parse_term(const std::string& text, const Signature& sig, const std::set<std::string>& vars);

}  // namespace epostar
