/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/confluence.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_map>

#include "chr/herbrand.hpp"
#include "chr/printer.hpp"

namespace chr {

namespace {

// a rule instantiated with fresh runtime variables
struct RuleInstance {
    std::size_t rule_index = 0;
    std::vector<ConstraintAtom> heads; // kept++removed order
    MatchSubst theta;                  // rule var -> fresh runtime var
};

RuleInstance instantiate_rule(const Program& program, std::size_t rule_index, VarTable& vars) {
    const Rule& rule = program.rule(rule_index);
    RuleInstance inst;
    inst.rule_index = rule_index;
    std::unordered_map<VarId, VarId> fresh;
    for (std::size_t pos = 0; pos < rule.head_count(); ++pos)
        inst.heads.push_back(instantiate(rule.head(pos), MatchSubst{}, vars, fresh));
    // every rule variable seen so far maps to its fresh instance; extend the
    // map to guard/priority variables so theta covers the whole rule
    for (const ConstraintAtom& g : rule.guard)
        instantiate(g, MatchSubst{}, vars, fresh);
    for (auto& [rule_var, fresh_var] : fresh) inst.theta.bind(rule_var, Term::var(fresh_var));
    return inst;
}

Term subst(const Term& t, const MatchSubst& theta) {
    std::unordered_map<VarId, VarId> no_fresh;
    VarTable dummy;
    return instantiate(t, theta, dummy, no_fresh);
}

// guard absorption into the overlap's built-in store: equations are told,
// ground comparisons decided. Returns: 1 ok, 0 unsatisfiable, -1 undecided.
int absorb_guard(const Rule& rule, const MatchSubst& theta, Bindings& b) {
    for (const ConstraintAtom& g : rule.guard) {
        if (g.symbol == "true") continue;
        if (g.symbol == "fail") return 0;
        if (g.symbol == "=" || g.symbol == "==") {
            if (!b.unify(subst(g.args[0], theta), subst(g.args[1], theta))) return 0;
            continue;
        }
        GuardStatus s = check_guard_atom(g, theta, b);
        if (s == GuardStatus::holds) continue;
        if (s == GuardStatus::fails) {
            // a failing ground comparison kills the pair; a \== between
            // non-ground terms is undecided rather than false
            if (g.symbol == "\\==" && !(b.is_ground(subst(g.args[0], theta)) &&
                                        b.is_ground(subst(g.args[1], theta))))
                return -1;
            return 0;
        }
        return -1; // nonground
    }
    return 1;
}

// all nonempty partial bijections between head positions of two instances
// with compatible symbols
void enumerate_pairings(const RuleInstance& a, const RuleInstance& b,
                        std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& out) {
    std::vector<std::pair<std::size_t, std::size_t>> current;
    std::vector<bool> used_b(b.heads.size(), false);
    std::function<void(std::size_t)> rec = [&](std::size_t pos_a) {
        if (pos_a == a.heads.size()) {
            if (!current.empty()) out.push_back(current);
            return;
        }
        rec(pos_a + 1); // pos_a unmatched
        for (std::size_t pos_b = 0; pos_b < b.heads.size(); ++pos_b) {
            if (used_b[pos_b]) continue;
            if (!(a.heads[pos_a].key() == b.heads[pos_b].key())) continue;
            used_b[pos_b] = true;
            current.emplace_back(pos_a, pos_b);
            rec(pos_a + 1);
            current.pop_back();
            used_b[pos_b] = false;
        }
    };
    rec(0);
}

} // namespace

std::vector<CriticalPair> critical_pairs(const Program& program) {
    std::vector<CriticalPair> pairs;
    for (std::size_t r1 = 0; r1 < program.size(); ++r1) {
        for (std::size_t r2 = r1; r2 < program.size(); ++r2) {
            const Rule& rule1 = program.rule(r1);
            const Rule& rule2 = program.rule(r2);

            VarTable vars;
            RuleInstance inst1 = instantiate_rule(program, r1, vars);
            RuleInstance inst2 = instantiate_rule(program, r2, vars);

            std::vector<std::vector<std::pair<std::size_t, std::size_t>>> pairings;
            enumerate_pairings(inst1, inst2, pairings);

            for (const auto& pairing : pairings) {
                // identity pairing of a rule with itself is the same transition
                if (r1 == r2) {
                    bool identity = pairing.size() == rule1.head_count();
                    if (identity)
                        for (auto [pa, pb] : pairing)
                            if (pa != pb) { identity = false; break; }
                    if (identity) continue;
                }
                // the shared portion must meet a removed head of either rule
                bool removed_overlap = false;
                for (auto [pa, pb] : pairing)
                    removed_overlap = removed_overlap || !rule1.head_is_kept(pa) ||
                                      !rule2.head_is_kept(pb);
                if (!removed_overlap) continue;

                ExecutionState overlap;
                overlap.vars = vars;
                // externals: every variable of both instances
                for (std::size_t v = 0; v < overlap.vars.size(); ++v)
                    overlap.query_vars.push_back(static_cast<VarId>(v));

                // mgu of the paired heads
                bool unifiable = true;
                for (auto [pa, pb] : pairing) {
                    const ConstraintAtom& ha = inst1.heads[pa];
                    const ConstraintAtom& hb = inst2.heads[pb];
                    for (std::size_t i = 0; unifiable && i < ha.args.size(); ++i)
                        unifiable = overlap.bindings.unify(ha.args[i], hb.args[i]);
                    if (!unifiable) break;
                }
                if (!unifiable) continue;

                // both guards join the built-in store
                int g1 = absorb_guard(rule1, inst1.theta, overlap.bindings);
                if (g1 == 0) continue;
                int g2 = absorb_guard(rule2, inst2.theta, overlap.bindings);
                if (g2 == 0) continue;

                // store: heads of rule 1, then unpaired heads of rule 2
                std::vector<ConstraintId> ids1, ids2(inst2.heads.size(), -1);
                for (const ConstraintAtom& h : inst1.heads)
                    ids1.push_back(introduce_in_state(overlap, h));
                for (auto [pa, pb] : pairing) ids2[pb] = ids1[pa];
                for (std::size_t pb = 0; pb < inst2.heads.size(); ++pb)
                    if (ids2[pb] < 0) ids2[pb] = introduce_in_state(overlap, inst2.heads[pb]);

                CriticalPair cp;
                cp.rule1 = r1;
                cp.rule2 = r2;
                cp.overlap_print = print_store(overlap.store, overlap.bindings, false);
                cp.guard_undecided = g1 < 0 || g2 < 0;
                cp.overlap = overlap;
                if (!cp.guard_undecided) {
                    cp.step1 = make_apply_label(overlap, rule1, ids1, inst1.theta);
                    cp.succ1 = overlap;
                    std::vector<ConstraintAtom> body1 =
                        apply_in_state(cp.succ1, rule1, ids1, inst1.theta);
                    cp.succ1.goal.insert(cp.succ1.goal.begin(), body1.begin(), body1.end());

                    cp.step2 = make_apply_label(overlap, rule2, ids2, inst2.theta);
                    cp.succ2 = overlap;
                    std::vector<ConstraintAtom> body2 =
                        apply_in_state(cp.succ2, rule2, ids2, inst2.theta);
                    cp.succ2.goal.insert(cp.succ2.goal.begin(), body2.begin(), body2.end());
                }
                pairs.push_back(std::move(cp));
            }
        }
    }
    return pairs;
}

PairRecord joinable(const Program& program, const CriticalPair& pair, std::size_t fuel) {
    PairRecord rec;
    rec.rule1 = program.rule(pair.rule1).name;
    rec.rule2 = program.rule(pair.rule2).name;
    rec.overlap_print = pair.overlap_print;
    if (pair.guard_undecided) {
        rec.verdict = PairVerdict::inconclusive;
        rec.note = "guard";
        return rec;
    }
    // the two sides explore in lockstep; the first normal form both can reach
    // decides joinability without draining a possibly unbounded state space
    Explorer side1(program, pair.succ1);
    Explorer side2(program, pair.succ2);
    std::size_t budget = fuel;
    while ((!side1.exhausted() || !side2.exhausted()) && budget > 0) {
        --budget;
        std::optional<std::string> n1 = side1.step();
        std::optional<std::string> n2 = side2.step();
        if ((n1 && !n1->empty() && side2.normal_forms().count(*n1)) ||
            (n2 && !n2->empty() && side1.normal_forms().count(*n2))) {
            rec.verdict = PairVerdict::joins;
            return rec;
        }
    }
    for (const auto& [key, _] : side1.normal_forms())
        if (side2.normal_forms().count(key)) {
            rec.verdict = PairVerdict::joins;
            return rec;
        }
    if (!side1.exhausted() || !side2.exhausted() || side1.normal_forms().empty() ||
        side2.normal_forms().empty()) {
        rec.verdict = PairVerdict::inconclusive;
        rec.note = "fuel";
        return rec;
    }
    rec.verdict = PairVerdict::distinct;
    const NormalForm& w1 = side1.normal_forms().begin()->second;
    const NormalForm& w2 = side2.normal_forms().begin()->second;
    rec.witness1_key = w1.key;
    rec.witness2_key = w2.key;
    rec.witness1_trace.push_back(pair.step1);
    for (const TransitionLabel& l : w1.trace) rec.witness1_trace.push_back(l);
    rec.witness2_trace.push_back(pair.step2);
    for (const TransitionLabel& l : w2.trace) rec.witness2_trace.push_back(l);
    return rec;
}

bool states_equivalent(const ExecutionState& a, const ExecutionState& b) {
    if (a.failed() || b.failed()) return a.failed() && b.failed();
    return nf_key(a) == nf_key(b);
}

namespace {

const char* verdict_word(PairVerdict v) {
    switch (v) {
        case PairVerdict::joins: return "JOINS";
        case PairVerdict::distinct: return "NON-JOINABLE";
        case PairVerdict::inconclusive: return "INCONCLUSIVE";
    }
    return "?";
}

} // namespace

std::string ConfluenceReport::summary_line() const {
    std::ostringstream out;
    switch (verdict) {
        case Verdict::confluent:
            out << "CONFLUENT (" << pairs.size() << " pairs checked)";
            break;
        case Verdict::non_joinable: {
            std::size_t n = 0;
            for (const PairRecord& p : pairs)
                if (p.verdict == PairVerdict::distinct) ++n;
            out << "NON-JOINABLE (" << n << " of " << pairs.size() << " pairs)";
            break;
        }
        case Verdict::inconclusive: {
            std::size_t n = 0;
            for (const PairRecord& p : pairs)
                if (p.verdict == PairVerdict::inconclusive) ++n;
            out << "INCONCLUSIVE (" << n << " of " << pairs.size() << " pairs undecided)";
            break;
        }
    }
    return out.str();
}

std::string ConfluenceReport::machine_text() const {
    std::ostringstream out;
    for (const PairRecord& p : pairs) {
        out << "PAIR " << p.rule1 << " " << p.rule2 << " {" << p.overlap_print << "} "
            << verdict_word(p.verdict);
        if (!p.note.empty()) out << " (" << p.note << ")";
        out << "\n";
        if (p.verdict == PairVerdict::distinct) {
            out << "  WITNESS 1: " << p.witness1_key << "\n";
            out << "  WITNESS 2: " << p.witness2_key << "\n";
        }
    }
    out << summary_line() << "\n";
    return out.str();
}

ConfluenceReport check_confluence(const Program& program, std::size_t fuel) {
    ConfluenceReport report;
    std::vector<CriticalPair> pairs = critical_pairs(program);
    for (const CriticalPair& pair : pairs) report.pairs.push_back(joinable(program, pair, fuel));
    std::sort(report.pairs.begin(), report.pairs.end(),
              [](const PairRecord& a, const PairRecord& b) {
                  if (a.rule1 != b.rule1) return a.rule1 < b.rule1;
                  if (a.rule2 != b.rule2) return a.rule2 < b.rule2;
                  return a.overlap_print < b.overlap_print;
              });
    bool any_distinct = false, any_inconclusive = false;
    for (const PairRecord& p : report.pairs) {
        any_distinct = any_distinct || p.verdict == PairVerdict::distinct;
        any_inconclusive = any_inconclusive || p.verdict == PairVerdict::inconclusive;
    }
    report.verdict = any_distinct ? ConfluenceReport::Verdict::non_joinable
                     : any_inconclusive ? ConfluenceReport::Verdict::inconclusive
                                        : ConfluenceReport::Verdict::confluent;
    return report;
}

} // namespace chr
