/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_PRINTER_HPP
#define CHRKIT_PRINTER_HPP

#include <string>
#include <vector>

#include "chr/bindings.hpp"
#include "chr/program.hpp"
#include "chr/store.hpp"

namespace chr {

/// Assigns display names to variables while printing. Canonical mode renames
/// every variable to _G0, _G1, ... in first-occurrence order; preserve mode
/// uses VarTable names for runtime variables (rule variables always print
/// their rule-local names).
class Namer {
public:
    static Namer canonical() { return Namer(nullptr); }
    static Namer preserving(const VarTable& names) { return Namer(&names); }

    std::string name_of(const Term& var_term, const std::vector<std::string>* rule_names);

private:
    explicit Namer(const VarTable* names) : runtime_(names) {}
    const VarTable* runtime_;
    std::vector<std::pair<std::pair<bool, VarId>, std::string>> assigned_;
    int next_g_ = 0;
};

/// Renders a term, dereferencing through b when given. Known binary operators
/// print infix with minimal parentheses; word operators (mod, is) are spaced.
std::string print_term(const Term& t, const Bindings* b, Namer& namer,
                       const std::vector<std::string>* rule_names = nullptr);
std::string print_atom(const ConstraintAtom& a, const Bindings* b, Namer& namer,
                       const std::vector<std::string>* rule_names = nullptr);

/// Canonical one-shot renderings (fresh _G numbering per call).
std::string print_canonical(const Term& t, const Bindings* b = nullptr);
std::string print_canonical(const ConstraintAtom& a, const Bindings* b = nullptr);

/// Canonical store snapshot: entries sorted by symbol, argument term order,
/// then id; variables named _G0, _G1, ... in first-occurrence order.
std::string print_store(const Store& s, const Bindings& b, bool with_ids = true);

/// Store entries in canonical order (shared by printing and state keys).
std::vector<ConstraintId> store_print_order(const Store& s, const Bindings& b);

/// Rule and program renderings that re-parse to a structurally identical
/// program (round-trip).
std::string print_rule(const Rule& r);
std::string print_program(const Program& p);

} // namespace chr

#endif // CHRKIT_PRINTER_HPP
