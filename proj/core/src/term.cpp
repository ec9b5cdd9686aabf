/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/term.hpp"

namespace chr {

Term Term::var(VarId id, bool rule_scope) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::var;
    n->var = id;
    n->rule_scope = rule_scope;
    return Term(std::move(n));
}

Term Term::atom(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::atom;
    n->name = std::move(name);
    return Term(std::move(n));
}

Term Term::integer(std::int64_t value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::integer;
    n->ival = value;
    return Term(std::move(n));
}

Term Term::compound(std::string functor, std::vector<Term> args) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::compound;
    n->name = std::move(functor);
    n->args = std::move(args);
    return Term(std::move(n));
}

bool Term::equals(const Term& other) const {
    return compare(*this, other) == 0;
}

int Term::compare(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return 0;
    auto rank = [](Kind k) {
        switch (k) {
            case Kind::var: return 0;
            case Kind::integer: return 1;
            case Kind::atom: return 2;
            case Kind::compound: return 3;
        }
        return 4;
    };
    if (rank(a.kind()) != rank(b.kind())) return rank(a.kind()) < rank(b.kind()) ? -1 : 1;
    switch (a.kind()) {
        case Kind::var: {
            if (a.var_is_rule_scoped() != b.var_is_rule_scoped())
                return a.var_is_rule_scoped() ? -1 : 1;
            if (a.var_id() != b.var_id()) return a.var_id() < b.var_id() ? -1 : 1;
            return 0;
        }
        case Kind::integer:
            if (a.int_value() != b.int_value()) return a.int_value() < b.int_value() ? -1 : 1;
            return 0;
        case Kind::atom:
            return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Kind::compound: {
            if (a.arity() != b.arity()) return a.arity() < b.arity() ? -1 : 1;
            if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
            for (std::size_t i = 0; i < a.arity(); ++i)
                if (int c = compare(a.args()[i], b.args()[i]); c != 0) return c;
            return 0;
        }
    }
    return 0;
}

bool is_builtin_symbol(const std::string& symbol, std::size_t arity) {
    if (arity == 0) return symbol == "true" || symbol == "fail";
    if (arity != 2) return false;
    return symbol == "=" || symbol == "==" || symbol == "\\==" || symbol == "<" ||
           symbol == "=<" || symbol == ">" || symbol == ">=" || symbol == "=:=" ||
           symbol == "=\\=" || symbol == "is";
}

bool is_arith_functor(const std::string& symbol, std::size_t arity) {
    if (arity == 2)
        return symbol == "+" || symbol == "-" || symbol == "*" || symbol == "mod";
    if (arity == 1) return symbol == "-";
    return false;
}

} // namespace chr
