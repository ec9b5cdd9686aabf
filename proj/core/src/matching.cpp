/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/matching.hpp"

#include <algorithm>
#include <set>

#include "chr/herbrand.hpp"

namespace chr {

namespace {

void rule_vars_of(const Term& t, std::set<VarId>& out) {
    if (t.is_var()) {
        if (t.var_is_rule_scoped()) out.insert(t.var_id());
        return;
    }
    for (const Term& a : t.args()) rule_vars_of(a, out);
}

void rule_vars_of(const ConstraintAtom& a, std::set<VarId>& out) {
    for (const Term& t : a.args) rule_vars_of(t, out);
}

// arguments whose variables are all bound by the heads matched so far
// (variable-free arguments do not count: they carry no join information)
std::size_t bound_arg_count(const ConstraintAtom& a, const std::set<VarId>& bound) {
    std::size_t n = 0;
    for (const Term& t : a.args) {
        std::set<VarId> vars;
        rule_vars_of(t, vars);
        if (vars.empty()) continue;
        bool all = true;
        for (VarId v : vars)
            if (!bound.count(v)) {
                all = false;
                break;
            }
        if (all) ++n;
    }
    return n;
}

} // namespace

JoinPlan order_partners(const Rule& rule, std::size_t active_pos, const Program& program) {
    JoinPlan plan;
    std::vector<std::size_t> remaining;
    for (std::size_t pos = 0; pos < rule.head_count(); ++pos)
        if (pos != active_pos) remaining.push_back(pos);
    std::set<VarId> bound;
    rule_vars_of(rule.head(active_pos), bound);
    while (!remaining.empty()) {
        std::size_t best = 0;
        std::size_t best_score = bound_arg_count(rule.head(remaining[0]), bound);
        std::size_t best_fanout = program.fan_out(rule.head(remaining[0]).key());
        for (std::size_t i = 1; i < remaining.size(); ++i) {
            const ConstraintAtom& h = rule.head(remaining[i]);
            std::size_t score = bound_arg_count(h, bound);
            std::size_t fanout = program.fan_out(h.key());
            if (score > best_score || (score == best_score && fanout < best_fanout)) {
                best = i;
                best_score = score;
                best_fanout = fanout;
            }
        }
        std::size_t pos = remaining[best];
        plan.order.push_back(pos);
        rule_vars_of(rule.head(pos), bound);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return plan;
}

namespace {

struct Enumerator {
    const Program& program;
    const Rule& rule;
    const ExecutionState& st;
    const InstanceFn& fn;
    std::vector<std::size_t> order;
    std::vector<ConstraintId> ids;
    MatchSubst theta;

    bool used(ConstraintId id) const {
        return std::find(ids.begin(), ids.end(), id) != ids.end();
    }

    bool leaf() {
        if (st.history.contains(rule.name, ids)) return true;
        if (check_guard(rule.guard, theta, st.bindings) != GuardStatus::holds) return true;
        return fn(ids, theta);
    }

    bool rec(std::size_t k) {
        if (k == order.size()) return leaf();
        std::size_t pos = order[k];
        const ConstraintAtom& pattern = rule.head(pos);
        for (ConstraintId id : st.store.candidates(pattern, theta, st.bindings)) {
            if (used(id)) continue;
            std::size_t mark = theta.size();
            if (match_atom(pattern, st.store.get(id).atom, st.bindings, theta)) {
                ids[pos] = id;
                bool go_on = rec(k + 1);
                ids[pos] = -1;
                theta.truncate(mark);
                if (!go_on) return false;
            } else {
                theta.truncate(mark);
            }
        }
        return true;
    }
};

} // namespace

bool for_each_instance(const Program& program, std::size_t rule_idx, const ExecutionState& st,
                       std::optional<std::pair<std::size_t, ConstraintId>> anchor,
                       const InstanceFn& fn) {
    const Rule& rule = program.rule(rule_idx);
    Enumerator e{program, rule, st, fn, {}, {}, {}};
    e.ids.assign(rule.head_count(), -1);
    if (anchor.has_value()) {
        auto [pos, id] = *anchor;
        if (!st.store.is_live(id)) return true;
        if (!match_atom(rule.head(pos), st.store.get(id).atom, st.bindings, e.theta)) return true;
        e.ids[pos] = id;
        e.order = order_partners(rule, pos, program).order;
    } else {
        e.order.resize(rule.head_count());
        for (std::size_t i = 0; i < e.order.size(); ++i) e.order[i] = i;
    }
    return e.rec(0);
}

} // namespace chr
