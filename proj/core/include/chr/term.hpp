/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_TERM_HPP
#define CHRKIT_TERM_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace chr {

/// Identifier of a logical variable. Rule variables and runtime variables
/// live in separate id spaces; a Term records which space its id belongs to.
using VarId = std::int32_t;

/// An immutable Herbrand term: variable, atom, integer or compound.
/// Copies are cheap (shared structure); terms are never mutated in place,
/// all instantiation goes through Bindings / substitutions.
class Term {
public:
    enum class Kind : std::uint8_t { var, atom, integer, compound };

    static Term var(VarId id, bool rule_scope = false);
    static Term atom(std::string name);
    static Term integer(std::int64_t value);
    static Term compound(std::string functor, std::vector<Term> args);

    Kind kind() const { return node_->kind; }
    bool is_var() const { return node_->kind == Kind::var; }
    bool is_atom() const { return node_->kind == Kind::atom; }
    bool is_int() const { return node_->kind == Kind::integer; }
    bool is_compound() const { return node_->kind == Kind::compound; }

    VarId var_id() const { return node_->var; }
    bool var_is_rule_scoped() const { return node_->rule_scope; }
    std::int64_t int_value() const { return node_->ival; }
    /// Atom name or compound functor.
    const std::string& name() const { return node_->name; }
    const std::vector<Term>& args() const { return node_->args; }
    std::size_t arity() const { return node_->args.size(); }

    /// Structural equality, no dereferencing.
    bool equals(const Term& other) const;

    /// Total syntactic order: var < int < atom < compound; vars by (scope, id),
    /// ints by value, atoms by name, compounds by (arity, functor, args).
    static int compare(const Term& a, const Term& b);

private:
    struct Node {
        Kind kind;
        bool rule_scope = false;
        VarId var = 0;
        std::int64_t ival = 0;
        std::string name;
        std::vector<Term> args;
    };
    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

/// Key identifying a constraint symbol: functor/arity pair.
struct SymbolArity {
    std::string symbol;
    std::uint32_t arity = 0;

    friend bool operator==(const SymbolArity& a, const SymbolArity& b) {
        return a.arity == b.arity && a.symbol == b.symbol;
    }
    friend bool operator<(const SymbolArity& a, const SymbolArity& b) {
        if (a.symbol != b.symbol) return a.symbol < b.symbol;
        return a.arity < b.arity;
    }
    std::string to_string() const { return symbol + "/" + std::to_string(arity); }
};

/// A constraint atom: CHR constraint or built-in, before identification.
struct ConstraintAtom {
    enum class Kind : std::uint8_t { chr, builtin };

    std::string symbol;
    std::vector<Term> args;
    Kind kind = Kind::chr;

    std::size_t arity() const { return args.size(); }
    SymbolArity key() const { return {symbol, static_cast<std::uint32_t>(args.size())}; }
    bool is_builtin() const { return kind == Kind::builtin; }
};

/// True for the fixed built-in vocabulary: true/0, fail/0, =/2, ==/2, \==/2,
/// </2, =</2, >/2, >=/2, =:=/2, =\=/2, is/2.
bool is_builtin_symbol(const std::string& symbol, std::size_t arity);

/// True for the arithmetic functors evaluated by eval_arith: +/2 -/2 */2 mod/2 -/1.
bool is_arith_functor(const std::string& symbol, std::size_t arity);

} // namespace chr

#endif // CHRKIT_TERM_HPP
