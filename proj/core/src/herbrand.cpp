/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/herbrand.hpp"

#include <algorithm>
#include <cassert>

namespace chr {

const Term* MatchSubst::lookup(VarId rule_var) const {
    for (const auto& [v, t] : entries_)
        if (v == rule_var) return &t;
    return nullptr;
}

void MatchSubst::bind(VarId rule_var, Term t) {
    assert(lookup(rule_var) == nullptr);
    entries_.emplace_back(rule_var, std::move(t));
}

void MatchSubst::truncate(std::size_t size) {
    assert(size <= entries_.size());
    entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(size), entries_.end());
}

namespace {

// Pairs of variable ids already under comparison; revisiting a pair means a
// cycle on both sides, which syntactic equality treats as equal.
struct EqGuard {
    std::vector<std::pair<VarId, VarId>> pairs;
    bool seen(VarId a, VarId b) const {
        for (auto& p : pairs)
            if (p.first == a && p.second == b) return true;
        return false;
    }
};

bool equal_rec(const Bindings& b, const Term& x0, const Term& y0, EqGuard& guard) {
    Term x = b.resolve(x0);
    Term y = b.resolve(y0);
    if (x.is_var() || y.is_var()) {
        return x.is_var() && y.is_var() && x.var_is_rule_scoped() == y.var_is_rule_scoped() &&
               x.var_id() == y.var_id();
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
        case Term::Kind::integer: return x.int_value() == y.int_value();
        case Term::Kind::atom: return x.name() == y.name();
        case Term::Kind::compound: {
            if (x.name() != y.name() || x.arity() != y.arity()) return false;
            bool guarded = false;
            if (x0.is_var() && y0.is_var()) {
                if (guard.seen(x0.var_id(), y0.var_id())) return true;
                guard.pairs.emplace_back(x0.var_id(), y0.var_id());
                guarded = true;
            }
            bool ok = true;
            for (std::size_t i = 0; ok && i < x.arity(); ++i)
                ok = equal_rec(b, x.args()[i], y.args()[i], guard);
            if (guarded) guard.pairs.pop_back();
            return ok;
        }
        case Term::Kind::var: return false; // unreachable
    }
    return false;
}

} // namespace

bool equal_under(const Bindings& b, const Term& a, const Term& c) {
    EqGuard guard;
    return equal_rec(b, a, c, guard);
}

bool match_term(const Term& pattern, const Term& candidate, const Bindings& b,
                MatchSubst& theta) {
    if (pattern.is_var() && pattern.var_is_rule_scoped()) {
        if (const Term* bound = theta.lookup(pattern.var_id()))
            return equal_under(b, *bound, candidate);
        theta.bind(pattern.var_id(), b.resolve(candidate));
        return true;
    }
    Term c = b.resolve(candidate);
    switch (pattern.kind()) {
        case Term::Kind::var:
            // runtime variable inside a pattern: must be the same variable
            return c.is_var() && !c.var_is_rule_scoped() && c.var_id() == pattern.var_id();
        case Term::Kind::integer:
            return c.is_int() && c.int_value() == pattern.int_value();
        case Term::Kind::atom:
            return c.is_atom() && c.name() == pattern.name();
        case Term::Kind::compound: {
            if (!c.is_compound() || c.name() != pattern.name() || c.arity() != pattern.arity())
                return false;
            for (std::size_t i = 0; i < pattern.arity(); ++i)
                if (!match_term(pattern.args()[i], c.args()[i], b, theta)) return false;
            return true;
        }
    }
    return false;
}

bool match_atom(const ConstraintAtom& pattern, const ConstraintAtom& candidate,
                const Bindings& b, MatchSubst& theta) {
    if (pattern.symbol != candidate.symbol || pattern.arity() != candidate.arity() ||
        pattern.kind != candidate.kind)
        return false;
    std::size_t mark = theta.size();
    for (std::size_t i = 0; i < pattern.arity(); ++i) {
        if (!match_term(pattern.args[i], candidate.args[i], b, theta)) {
            theta.truncate(mark);
            return false;
        }
    }
    return true;
}

namespace {

std::int64_t floored_mod(std::int64_t a, std::int64_t m) {
    std::int64_t r = a % m;
    if (r != 0 && (r < 0) != (m < 0)) r += m;
    return r;
}

ArithResult eval_rec(const Term& t0, const MatchSubst* theta, const Bindings& b, int depth) {
    if (depth > 10000) return {ArithStatus::type_error};
    Term t = t0;
    if (t.is_var() && t.var_is_rule_scoped()) {
        if (theta == nullptr) return {ArithStatus::nonground};
        const Term* bound = theta->lookup(t.var_id());
        if (bound == nullptr) return {ArithStatus::nonground};
        t = *bound;
    }
    t = b.resolve(t);
    switch (t.kind()) {
        case Term::Kind::integer: return {ArithStatus::ok, t.int_value()};
        case Term::Kind::var:
            if (t.var_is_rule_scoped()) return eval_rec(t, theta, b, depth + 1);
            return {ArithStatus::nonground};
        case Term::Kind::atom: return {ArithStatus::type_error};
        case Term::Kind::compound: {
            if (!is_arith_functor(t.name(), t.arity())) return {ArithStatus::type_error};
            ArithResult lhs = eval_rec(t.args()[0], theta, b, depth + 1);
            if (lhs.status != ArithStatus::ok) return lhs;
            if (t.arity() == 1) return {ArithStatus::ok, -lhs.value}; // unary minus
            ArithResult rhs = eval_rec(t.args()[1], theta, b, depth + 1);
            if (rhs.status != ArithStatus::ok) return rhs;
            if (t.name() == "+") return {ArithStatus::ok, lhs.value + rhs.value};
            if (t.name() == "-") return {ArithStatus::ok, lhs.value - rhs.value};
            if (t.name() == "*") return {ArithStatus::ok, lhs.value * rhs.value};
            if (t.name() == "mod") {
                if (rhs.value == 0) return {ArithStatus::type_error};
                return {ArithStatus::ok, floored_mod(lhs.value, rhs.value)};
            }
            return {ArithStatus::type_error};
        }
    }
    return {ArithStatus::type_error};
}

} // namespace

ArithResult eval_arith(const Term& t, const Bindings& b) {
    return eval_rec(t, nullptr, b, 0);
}

ArithResult eval_arith(const Term& t, const MatchSubst& theta, const Bindings& b) {
    return eval_rec(t, &theta, b, 0);
}

Term normalize_arith(const Term& t, const Bindings& b) {
    if (t.is_compound()) {
        if (is_arith_functor(t.name(), t.arity())) {
            ArithResult r = eval_arith(t, b);
            if (r.status == ArithStatus::ok) return Term::integer(r.value);
        }
        std::vector<Term> args;
        args.reserve(t.arity());
        bool changed = false;
        for (const Term& a : t.args()) {
            args.push_back(normalize_arith(a, b));
            changed = changed || !args.back().equals(a);
        }
        if (!changed) return t;
        return Term::compound(t.name(), std::move(args));
    }
    return t;
}

namespace {

bool has_unmatched_rule_var(const Term& t, const MatchSubst& theta) {
    if (t.is_var()) return t.var_is_rule_scoped() && theta.lookup(t.var_id()) == nullptr;
    if (!t.is_compound()) return false;
    for (const Term& a : t.args())
        if (has_unmatched_rule_var(a, theta)) return true;
    return false;
}

// Replaces theta-matched rule variables; callers must have excluded unmatched ones.
Term subst_rule_vars(const Term& t, const MatchSubst& theta) {
    if (t.is_var()) {
        if (!t.var_is_rule_scoped()) return t;
        const Term* bound = theta.lookup(t.var_id());
        assert(bound != nullptr);
        return *bound;
    }
    if (!t.is_compound()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const Term& a : t.args()) args.push_back(subst_rule_vars(a, theta));
    return Term::compound(t.name(), std::move(args));
}

// Equality of two rule-side terms under theta and b, ask-only.
// tribool: 1 equal, 0 not equal, -1 nonground (unmatched rule var involved).
int equal_guard(const Term& x0, const Term& y0, const MatchSubst& theta, const Bindings& b) {
    if (has_unmatched_rule_var(x0, theta) || has_unmatched_rule_var(y0, theta)) return -1;
    return equal_under(b, subst_rule_vars(x0, theta), subst_rule_vars(y0, theta)) ? 1 : 0;
}

} // namespace

GuardStatus check_guard_atom(const ConstraintAtom& g, const MatchSubst& theta,
                             const Bindings& b) {
    assert(g.is_builtin());
    if (g.symbol == "true") return GuardStatus::holds;
    if (g.symbol == "fail") return GuardStatus::fails;
    const Term& lhs = g.args[0];
    const Term& rhs = g.args[1];
    if (g.symbol == "==" || g.symbol == "=") {
        int r = equal_guard(lhs, rhs, theta, b);
        if (r < 0) return GuardStatus::nonground;
        return r == 1 ? GuardStatus::holds : GuardStatus::fails;
    }
    if (g.symbol == "\\==") {
        int r = equal_guard(lhs, rhs, theta, b);
        if (r < 0) return GuardStatus::nonground;
        return r == 0 ? GuardStatus::holds : GuardStatus::fails;
    }
    // arithmetic comparison, including `is` as an entailment check
    ArithResult a = eval_arith(lhs, theta, b);
    ArithResult c = eval_arith(rhs, theta, b);
    if (g.symbol == "is") {
        // in guard position: LHS must already denote the value of RHS
        if (c.status == ArithStatus::nonground) return GuardStatus::nonground;
        if (c.status == ArithStatus::type_error) return GuardStatus::fails;
        if (a.status == ArithStatus::nonground) return GuardStatus::nonground;
        if (a.status == ArithStatus::type_error) return GuardStatus::fails;
        return a.value == c.value ? GuardStatus::holds : GuardStatus::fails;
    }
    if (a.status == ArithStatus::nonground || c.status == ArithStatus::nonground)
        return GuardStatus::nonground;
    if (a.status == ArithStatus::type_error || c.status == ArithStatus::type_error)
        return GuardStatus::fails;
    bool ok = false;
    if (g.symbol == "<") ok = a.value < c.value;
    else if (g.symbol == "=<") ok = a.value <= c.value;
    else if (g.symbol == ">") ok = a.value > c.value;
    else if (g.symbol == ">=") ok = a.value >= c.value;
    else if (g.symbol == "=:=") ok = a.value == c.value;
    else if (g.symbol == "=\\=") ok = a.value != c.value;
    else return GuardStatus::fails;
    return ok ? GuardStatus::holds : GuardStatus::fails;
}

GuardStatus check_guard(const std::vector<ConstraintAtom>& guard, const MatchSubst& theta,
                        const Bindings& b) {
    for (const ConstraintAtom& g : guard) {
        GuardStatus s = check_guard_atom(g, theta, b);
        if (s != GuardStatus::holds) return s;
    }
    return GuardStatus::holds;
}

Term instantiate(const Term& t, const MatchSubst& theta, VarTable& vars,
                 std::unordered_map<VarId, VarId>& fresh_map) {
    switch (t.kind()) {
        case Term::Kind::var: {
            if (!t.var_is_rule_scoped()) return t;
            if (const Term* bound = theta.lookup(t.var_id())) return *bound;
            auto it = fresh_map.find(t.var_id());
            if (it == fresh_map.end())
                it = fresh_map.emplace(t.var_id(), vars.fresh()).first;
            return Term::var(it->second);
        }
        case Term::Kind::atom:
        case Term::Kind::integer:
            return t;
        case Term::Kind::compound: {
            std::vector<Term> args;
            args.reserve(t.arity());
            for (const Term& a : t.args()) args.push_back(instantiate(a, theta, vars, fresh_map));
            return Term::compound(t.name(), std::move(args));
        }
    }
    return t;
}

ConstraintAtom instantiate(const ConstraintAtom& a, const MatchSubst& theta, VarTable& vars,
                           std::unordered_map<VarId, VarId>& fresh_map) {
    ConstraintAtom out;
    out.symbol = a.symbol;
    out.kind = a.kind;
    out.args.reserve(a.args.size());
    for (const Term& t : a.args) out.args.push_back(instantiate(t, theta, vars, fresh_map));
    return out;
}

} // namespace chr
