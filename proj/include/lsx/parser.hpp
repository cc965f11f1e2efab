#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lsx/basis.hpp"
#include "lsx/term.hpp"
#include "lsx/type.hpp"

namespace lsx {

struct ParseError : std::runtime_error {
    int line, col;
    ParseError(const std::string &msg, int line_, int col_)
        : std::runtime_error(msg + " at " + std::to_string(line_) + ":" + std::to_string(col_)),
          line(line_),
          col(col_) {}
};

// A parsed .lsx source: basis declarations, named (non-recursive, acyclic)
// definitions, and a main term. Definitions are inlined into later
// definitions and into the main term.
struct SourceFile {
    BasisRegistry registry;
    std::vector<std::pair<std::string, TermPtr>> defs;
    TermPtr main;  // null when the file only declares things
};

SourceFile parse_file(const std::string &source);

// Single-expression entry points (used heavily by tests and the harness).
TermPtr parse_term(const std::string &source, const BasisRegistry &reg);
TypePtr parse_type(const std::string &source, const BasisRegistry &reg);

}  // namespace lsx
