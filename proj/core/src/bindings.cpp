/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/bindings.hpp"

#include <algorithm>
#include <cassert>

namespace chr {

namespace {
bool contains(const std::vector<VarId>& xs, VarId v) {
    return std::find(xs.begin(), xs.end(), v) != xs.end();
}
} // namespace

Term Bindings::resolve(const Term& t) const {
    Term cur = t;
    std::vector<VarId> seen;
    while (cur.is_var() && !cur.var_is_rule_scoped()) {
        auto i = static_cast<std::size_t>(cur.var_id());
        if (i >= cells_.size() || !cells_[i].has_value()) return cur;
        if (contains(seen, cur.var_id())) return cur; // var cycle guard
        seen.push_back(cur.var_id());
        cur = *cells_[i];
    }
    return cur;
}

namespace {
Term expand_rec(const Bindings& b, const Term& t, std::vector<VarId>& path) {
    Term r = b.resolve(t);
    if (r.is_var()) return r;
    if (!r.is_compound()) return r;
    // remember which bound variable (if any) led here, to cut cycles
    VarId via = -1;
    if (t.is_var() && !t.var_is_rule_scoped() && b.is_bound(t.var_id())) via = t.var_id();
    if (via >= 0) {
        if (contains(path, via)) return t;
        path.push_back(via);
    }
    std::vector<Term> args;
    args.reserve(r.arity());
    for (const Term& a : r.args()) args.push_back(expand_rec(b, a, path));
    if (via >= 0) path.pop_back();
    return Term::compound(r.name(), std::move(args));
}
} // namespace

Term Bindings::expand(const Term& t) const {
    std::vector<VarId> path;
    return expand_rec(*this, t, path);
}

void Bindings::bind(VarId v, Term t) {
    auto i = static_cast<std::size_t>(v);
    if (i >= cells_.size()) cells_.resize(i + 1);
    assert(!cells_[i].has_value());
    cells_[i] = std::move(t);
    trail_.push_back(v);
    ++generation_;
}

bool Bindings::occurs(VarId v, const Term& t, std::vector<VarId>& path) const {
    Term r = resolve(t);
    if (r.is_var()) return !r.var_is_rule_scoped() && r.var_id() == v;
    if (!r.is_compound()) return false;
    if (t.is_var() && !t.var_is_rule_scoped()) {
        if (contains(path, t.var_id())) return false;
        path.push_back(t.var_id());
    }
    for (const Term& a : r.args())
        if (occurs(v, a, path)) return true;
    return false;
}

bool Bindings::unify(const Term& a, const Term& b) {
    Checkpoint mark = checkpoint();
    std::vector<std::pair<VarId, VarId>> guard;
    if (unify_rec(a, b, guard)) return true;
    undo_to(mark);
    return false;
}

bool Bindings::unify_rec(const Term& a, const Term& b,
                         std::vector<std::pair<VarId, VarId>>& guard) {
    Term x = resolve(a);
    Term y = resolve(b);
    if (x.is_var() && y.is_var() && x.var_id() == y.var_id()) return true;
    if (x.is_var()) {
        if (occurs_check_) {
            std::vector<VarId> path;
            if (occurs(x.var_id(), y, path)) return false;
        }
        bind(x.var_id(), y);
        return true;
    }
    if (y.is_var()) {
        if (occurs_check_) {
            std::vector<VarId> path;
            if (occurs(y.var_id(), x, path)) return false;
        }
        bind(y.var_id(), x);
        return true;
    }
    if (x.kind() != y.kind()) return false;
    switch (x.kind()) {
        case Term::Kind::integer: return x.int_value() == y.int_value();
        case Term::Kind::atom: return x.name() == y.name();
        case Term::Kind::compound: {
            if (x.name() != y.name() || x.arity() != y.arity()) return false;
            // without the occurs check two cyclic structures can descend
            // forever; a revisited variable pair unifies coinductively
            bool guarded = false;
            if (a.is_var() && !a.var_is_rule_scoped() && b.is_var() &&
                !b.var_is_rule_scoped()) {
                std::pair<VarId, VarId> key{a.var_id(), b.var_id()};
                for (const auto& p : guard)
                    if (p == key) return true;
                guard.push_back(key);
                guarded = true;
            }
            bool ok = true;
            for (std::size_t i = 0; ok && i < x.arity(); ++i)
                ok = unify_rec(x.args()[i], y.args()[i], guard);
            if (guarded) guard.pop_back();
            return ok;
        }
        case Term::Kind::var: return false; // unreachable
    }
    return false;
}

void Bindings::undo_to(const Checkpoint& mark) {
    assert(mark.trail_size <= trail_.size() && "undo past a released mark");
    while (trail_.size() > mark.trail_size) {
        VarId v = trail_.back();
        trail_.pop_back();
        cells_[static_cast<std::size_t>(v)].reset();
    }
}

std::vector<VarId> Bindings::bound_since(std::size_t trail_pos) const {
    std::vector<VarId> out;
    for (std::size_t i = trail_pos; i < trail_.size(); ++i) out.push_back(trail_[i]);
    return out;
}

namespace {
void collect_rec(const Bindings& b, const Term& t, std::vector<VarId>& out,
                 std::vector<VarId>& path) {
    Term r = b.resolve(t);
    if (r.is_var()) {
        if (!r.var_is_rule_scoped() && !contains(out, r.var_id())) out.push_back(r.var_id());
        return;
    }
    if (!r.is_compound()) return;
    if (t.is_var() && !t.var_is_rule_scoped() && b.is_bound(t.var_id())) {
        if (contains(path, t.var_id())) {
            // cyclic binding: report the looping variable, so the term counts
            // as nonground and never reaches the ground-value index
            if (!contains(out, t.var_id())) out.push_back(t.var_id());
            return;
        }
        path.push_back(t.var_id());
        for (const Term& a : r.args()) collect_rec(b, a, out, path);
        path.pop_back();
        return;
    }
    for (const Term& a : r.args()) collect_rec(b, a, out, path);
}
} // namespace

bool Bindings::is_ground(const Term& t) const {
    std::vector<VarId> vars, path;
    collect_rec(*this, t, vars, path);
    return vars.empty();
}

void Bindings::collect_vars(const Term& t, std::vector<VarId>& out) const {
    std::vector<VarId> path;
    collect_rec(*this, t, out, path);
}

} // namespace chr
