/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_PARSER_HPP
#define CHRKIT_PARSER_HPP

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chr/bindings.hpp"
#include "chr/program.hpp"

namespace chr {

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + msg),
          line(l),
          column(c) {}
};

/// Parses a `.chr` program text. Rules are normalized to simpagation form,
/// unnamed rules get generated unique names, and the occurrence table is
/// built. Throws ParseError with line/column on bad input.
Program parse_program(const std::string& text);

struct Query {
    std::vector<ConstraintAtom> atoms;
    /// Query variables in first-occurrence order; names live in the VarTable.
    std::vector<VarId> vars;
};

/// Parses a comma-separated goal. Variables are shared across the whole
/// query and interned as runtime variables in `vars`.
Query parse_query(const std::string& text, VarTable& vars);

} // namespace chr

#endif // CHRKIT_PARSER_HPP
