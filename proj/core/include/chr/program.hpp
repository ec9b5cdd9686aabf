/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_PROGRAM_HPP
#define CHRKIT_PROGRAM_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chr/term.hpp"

namespace chr {

/// A rule in simpagation normal form: kept \ removed <=> guard | body.
/// Simplification rules have empty kept, propagation rules empty removed.
/// Head positions are numbered kept first, then removed (textual order).
/// Rule variables are rule-local ids 0..var_count-1, flagged rule-scoped.
struct Rule {
    std::string name;
    std::vector<ConstraintAtom> kept;
    std::vector<ConstraintAtom> removed;
    std::vector<ConstraintAtom> guard; // never empty; defaults to [true]
    std::vector<ConstraintAtom> body;  // never empty; `true` when textually empty
    std::optional<Term> priority;      // arithmetic term over head variables
    std::size_t index = 0;             // position in the program
    std::vector<std::string> var_names;

    std::size_t head_count() const { return kept.size() + removed.size(); }
    const ConstraintAtom& head(std::size_t pos) const {
        return pos < kept.size() ? kept[pos] : removed[pos - kept.size()];
    }
    bool head_is_kept(std::size_t pos) const { return pos < kept.size(); }
    bool is_propagation() const { return removed.empty(); }
};

/// One occurrence of a constraint symbol in a rule head.
struct Occurrence {
    std::size_t rule_index = 0;
    std::size_t head_pos = 0;
    bool kept = true;
};

class Program {
public:
    Program() = default;
    /// Builds the occurrence table (textual rule order, left-to-right heads).
    static Program build(std::vector<Rule> rules, std::set<SymbolArity> declared);

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule& rule(std::size_t i) const { return rules_[i]; }
    std::size_t size() const { return rules_.size(); }

    const std::vector<Occurrence>& occurrences(const SymbolArity& key) const;
    const std::map<SymbolArity, std::vector<Occurrence>>& occurrence_table() const {
        return occurrences_;
    }
    const std::set<SymbolArity>& declared() const { return declared_; }

    bool has_priorities() const { return has_priorities_; }
    /// Number of head occurrences of a symbol, the static fan-out used by
    /// join ordering as a store-size proxy.
    std::size_t fan_out(const SymbolArity& key) const;

private:
    std::vector<Rule> rules_;
    std::map<SymbolArity, std::vector<Occurrence>> occurrences_;
    std::set<SymbolArity> declared_;
    bool has_priorities_ = false;
};

} // namespace chr

#endif // CHRKIT_PROGRAM_HPP
