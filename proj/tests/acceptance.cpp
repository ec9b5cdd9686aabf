/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

// Acceptance suite: one criterion per section, one PASS/FAIL line each.
// Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "chr/confluence.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "chr/priority.hpp"
#include "chr/refined.hpp"
#include "test_support.hpp"

using namespace chr;
using namespace testsup;

namespace {

int failures = 0;

struct CheckFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw CheckFailure(msg);
}

void criterion(const std::string& name, const std::function<void()>& body) {
    using clock = std::chrono::steady_clock;
    auto start = clock::now();
    try {
        body();
        double secs = std::chrono::duration<double>(clock::now() - start).count();
        std::printf("PASS  %s  (%.2fs)\n", name.c_str(), secs);
    } catch (const std::exception& e) {
        ++failures;
        std::printf("FAIL  %s: %s\n", name.c_str(), e.what());
    }
    std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

Program load(const std::string& name) {
    std::ifstream in(std::string(CHR_CORPUS_DIR) + "/" + name);
    require(bool(in), "cannot open corpus program " + name);
    std::ostringstream text;
    text << in.rdbuf();
    return parse_program(text.str());
}

std::set<std::int64_t> prime_args(const ExecutionState& st) {
    std::set<std::int64_t> out;
    for (const auto& [id, ic] : st.store.live()) {
        require(ic.atom.symbol == "prime", "unexpected residual constraint " + ic.atom.symbol);
        Term v = st.bindings.resolve(ic.atom.args[0]);
        require(v.is_int(), "prime argument not an integer");
        out.insert(v.int_value());
    }
    return out;
}

// ---------------------------------------------------------------------------

void criterion_leq_derivation() {
    auto start = std::chrono::steady_clock::now();
    Program leq = load("leq.chr");
    const std::string query = "leq(A,B),leq(B,C),leq(C,A)";
    for (int mode = 0; mode < 2; ++mode) {
        RunResult r = mode == 0 ? run_refined(leq, state_for(query))
                                : run(leq, state_for(query), Strategy::first());
        require(r.outcome == Outcome::final_state, "derivation did not reach a final state");
        require(r.state.store.size() == 0, "CHR store is not empty");
        Term a = r.state.bindings.resolve(Term::var(r.state.query_vars[0]));
        Term b = r.state.bindings.resolve(Term::var(r.state.query_vars[1]));
        Term c = r.state.bindings.resolve(Term::var(r.state.query_vars[2]));
        require(a.equals(b) && b.equals(c), "A, B, C are not all unified");
    }
    require(seconds_since(start) < 1.0, "exceeded 1 s");
}

void criterion_primes() {
    Program primes = load("primes.chr");
    auto start = std::chrono::steady_clock::now();
    for (int n = 2; n <= 50; ++n) {
        RunResult r = run_refined(primes, state_for("upto(" + std::to_string(n) + ")"));
        require(r.outcome == Outcome::final_state, "primes run did not finish");
        require(prime_args(r.state) == sieve_oracle(n),
                "wrong prime set for n=" + std::to_string(n));
    }
    require(seconds_since(start) < 1.0, "n=2..50 exceeded 1 s");

    auto big = std::chrono::steady_clock::now();
    RunResult r = run_refined(primes, state_for("upto(1000)"), 5000000);
    require(r.outcome == Outcome::final_state, "primes(1000) did not finish");
    require(prime_args(r.state) == sieve_oracle(1000), "wrong prime set for n=1000");
    require(seconds_since(big) < 5.0, "n=1000 exceeded 5 s");
}

void criterion_coin() {
    Program coin = load("coin.chr");
    ExploreResult e = explore_all(coin, state_for("throw(C)"));
    require(!e.truncated, "exploration truncated");
    require(e.normal_forms.size() == 2, "expected exactly 2 normal forms, got " +
                                            std::to_string(e.normal_forms.size()));
    std::set<std::string> answers;
    for (const NormalForm& nf : e.normal_forms) {
        require(nf.state.store.size() == 0, "store not empty in a coin normal form");
        for (const std::string& line : query_binding_lines(nf.state)) answers.insert(line);
    }
    require(answers == std::set<std::string>{"C = head", "C = tail"},
            "normal forms are not Coin=head / Coin=tail");
}

void criterion_dijkstra() {
    auto start = std::chrono::steady_clock::now();
    Program dijkstra = load("dijkstra.chr");
    std::mt19937_64 rng(20260810);
    for (int round = 0; round < 25; ++round) {
        int n = 2 + static_cast<int>(rng() % 9); // up to 10 nodes
        std::vector<OracleEdge> edges;
        std::ostringstream query;
        query << "source(n0)";
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                if (u == v || rng() % 100 >= 30) continue;
                std::int64_t w = 1 + static_cast<std::int64_t>(rng() % 9);
                edges.push_back({u, v, w});
                query << ", edge(n" << u << "," << w << ",n" << v << ")";
            }
        std::string q = query.str();
        RunResult r = run_priority(dijkstra, state_for(q));
        require(r.outcome == Outcome::final_state, "priority run did not finish");

        std::map<int, std::int64_t> oracle = shortest_paths_oracle(n, edges, 0);
        std::map<int, std::int64_t> got;
        for (const auto& [id, ic] : r.state.store.live()) {
            if (ic.atom.symbol != "dist") continue;
            Term node = r.state.bindings.resolve(ic.atom.args[0]);
            Term d = r.state.bindings.resolve(ic.atom.args[1]);
            require(node.is_atom() && d.is_int(), "malformed dist fact");
            int idx = std::stoi(node.name().substr(1));
            require(got.count(idx) == 0, "duplicate dist fact for " + node.name());
            got[idx] = d.int_value();
        }
        require(got == oracle, "dist facts differ from the shortest-path oracle");
        require(verify_priority_trace(dijkstra, state_for(q), r.trace),
                "priority soundness check failed");
    }
    require(seconds_since(start) < 5.0, "exceeded 5 s");
}

void criterion_agreement() {
    const char* names[] = {"leq.chr", "ab.chr",  "primes.chr", "coin.chr",
                           "pqr.chr", "gcd.chr", "dijkstra.chr"};
    std::mt19937_64 rng(4242);
    int passing = 0;
    for (const char* name : names) {
        Program p = load(name);
        ConfluenceReport report = check_confluence(p, 6000);
        if (report.verdict != ConfluenceReport::Verdict::confluent) continue;
        ++passing;
        // random small queries over the declared constraint symbols
        std::vector<SymbolArity> symbols(p.declared().begin(), p.declared().end());
        require(!symbols.empty(), "no declared symbols in a confluent corpus program");
        const char* pool[] = {"a", "b", "A", "B", "C"};
        for (int round = 0; round < 20; ++round) {
            std::ostringstream q;
            int atoms = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < atoms; ++i) {
                const SymbolArity& sym = symbols[rng() % symbols.size()];
                if (i > 0) q << ", ";
                q << sym.symbol;
                if (sym.arity > 0) {
                    q << "(";
                    for (std::uint32_t k = 0; k < sym.arity; ++k)
                        q << (k > 0 ? "," : "") << pool[rng() % 5];
                    q << ")";
                }
            }
            std::string query = q.str();
            RunResult r = run_refined(p, state_for(query));
            require(r.outcome == Outcome::final_state || r.outcome == Outcome::failed,
                    "refined run did not terminate on " + query);
            ExploreResult e = explore_all(p, state_for(query), 1500);
            require(e.normal_forms.size() == 1,
                    "explore_all found " + std::to_string(e.normal_forms.size()) +
                        " normal forms for " + query);
            require(states_equivalent(r.state, e.normal_forms[0].state),
                    "refined result differs from the unique normal form for " + query);
        }
    }
    require(passing >= 2, "fewer than two corpus programs pass the confluence check");
}

void criterion_confluence() {
    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    Program leq = load("leq.chr");
    ConfluenceReport leq_report = check_confluence(leq, 20000);
    require(leq_report.verdict == ConfluenceReport::Verdict::confluent, "leq not confluent");
    require(seconds_since(t0) < 2.0, "leq check exceeded 2 s");

    auto t1 = clock::now();
    Program pqr = parse_program("to_q @ p <=> q.\nto_r @ p <=> r.");
    ConfluenceReport pqr_report = check_confluence(pqr);
    require(pqr_report.verdict == ConfluenceReport::Verdict::non_joinable,
            "p/q/r not reported non-joinable");
    bool replayed = false;
    std::vector<CriticalPair> pairs = critical_pairs(pqr);
    for (const PairRecord& rec : pqr_report.pairs) {
        if (rec.verdict != PairVerdict::distinct) continue;
        for (const CriticalPair& cp : pairs) {
            if (pqr.rule(cp.rule1).name != rec.rule1 || pqr.rule(cp.rule2).name != rec.rule2)
                continue;
            ExecutionState nf1 = state_for(""), nf2 = state_for("");
            require(validate_trace(pqr, cp.overlap, rec.witness1_trace, &nf1),
                    "witness trace 1 does not replay");
            require(validate_trace(pqr, cp.overlap, rec.witness2_trace, &nf2),
                    "witness trace 2 does not replay");
            require(!states_equivalent(nf1, nf2), "witness states are equivalent");
            replayed = true;
        }
    }
    require(replayed, "no machine-replayable witness found");
    require(seconds_since(t1) < 2.0, "p/q/r check exceeded 2 s");

    auto t2 = clock::now();
    Program coin = load("coin.chr");
    require(check_confluence(coin).verdict == ConfluenceReport::Verdict::non_joinable,
            "coin not reported non-joinable");
    require(seconds_since(t2) < 2.0, "coin check exceeded 2 s");
}

void criterion_history_termination() {
    Program leq = load("leq.chr");
    const char* names[] = {"v1", "v2", "v3", "v4", "v5"};
    std::string q;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j) {
            if (!q.empty()) q += ", ";
            q += std::string("leq(") + names[i] + "," + names[j] + ")";
        }
    RunResult r = run_refined(leq, state_for(q), 10000);
    require(r.outcome == Outcome::final_state, "did not terminate within 10000 steps");
    std::set<std::pair<std::string, std::vector<ConstraintId>>> fired;
    for (const TransitionLabel& lab : r.trace) {
        if (lab.kind != StepKind::apply) continue;
        require(fired.insert({lab.rule_name, lab.ids}).second,
                "a (rule, id-tuple) fired twice");
    }
}

// --- criterion 8: property suites at >= 1000 random cases each -------------

void property_unify_oracle() {
    TermGen gen(808);
    for (int i = 0; i < 1000; ++i) {
        Term t1 = gen.term();
        Term t2 = gen.term();
        Bindings b;
        bool ok = b.unify(t1, t2);
        auto oracle = naive_unify(t1, t2);
        require(ok == oracle.has_value(), "unify disagrees with the naive oracle");
        if (ok) {
            Bindings strict(true);
            if (strict.unify(t1, t2))
                require(variants(b.expand(t1), oracle->apply(t1)),
                        "unifier not a variant of the oracle's");
        }
    }
}

void property_match_purity() {
    TermGen gen(909);
    for (int i = 0; i < 1000; ++i) {
        Bindings b;
        b.unify(Term::var(0), gen.term());
        ConstraintAtom cand{"p", {Term::var(0), gen.term()}, ConstraintAtom::Kind::chr};
        ConstraintAtom pat{"p", {Term::var(0, true), Term::var(1, true)},
                           ConstraintAtom::Kind::chr};
        std::uint64_t before = b.generation();
        MatchSubst theta;
        match_atom(pat, cand, b, theta);
        check_guard({ConstraintAtom{"==", {Term::var(0, true), Term::var(1, true)},
                                    ConstraintAtom::Kind::builtin}},
                    theta, b);
        require(b.generation() == before, "match or guard modified the bindings");
    }
}

void property_store_coherence() {
    std::mt19937_64 rng(111);
    for (int round = 0; round < 1000; ++round) {
        TermGen gen(rng());
        Bindings b;
        Store s;
        PropagationHistory h;
        std::vector<ConstraintId> live;
        for (int step = 0; step < 12; ++step) {
            if (live.empty() || rng() % 3 != 0) {
                live.push_back(s.introduce(
                    ConstraintAtom{rng() % 2 ? "p" : "q", {gen.term(), gen.term()},
                                   ConstraintAtom::Kind::chr},
                    b));
            } else {
                std::size_t k = rng() % live.size();
                s.remove(live[k], h);
                live.erase(live.begin() + static_cast<std::ptrdiff_t>(k));
            }
        }
        // recompute the symbol index from scratch
        std::map<SymbolArity, std::set<ConstraintId>> symbols;
        std::map<VarId, std::set<ConstraintId>> vars;
        for (const auto& [id, ic] : s.live()) {
            symbols[ic.atom.key()].insert(id);
            std::vector<VarId> mentioned;
            for (const Term& t : ic.atom.args) b.collect_vars(t, mentioned);
            for (VarId v : mentioned) vars[v].insert(id);
        }
        require(s.symbol_index() == symbols, "symbol index incoherent");
        require(s.variable_index() == vars, "variable index incoherent");
    }
}

void property_candidates_complete() {
    std::mt19937_64 rng(222);
    for (int round = 0; round < 1000; ++round) {
        TermGen gen(rng());
        gen.var_pool = 5;
        Bindings b;
        Store s;
        int n = 1 + static_cast<int>(rng() % 6);
        for (int i = 0; i < n; ++i)
            s.introduce(ConstraintAtom{"leq", {gen.term(), gen.term()},
                                       ConstraintAtom::Kind::chr},
                        b);
        for (int i = 0; i < 2; ++i) {
            std::size_t pos = b.trail_size();
            if (b.unify(Term::var(static_cast<VarId>(rng() % 5)), gen.term()))
                for (VarId v : b.bound_since(pos)) s.on_bound(v, b);
        }
        TermGen pgen(rng());
        std::function<Term(const Term&)> to_rule = [&](const Term& t) -> Term {
            if (t.is_var()) return Term::var(t.var_id(), true);
            if (!t.is_compound()) return t;
            std::vector<Term> args;
            for (const Term& a : t.args()) args.push_back(to_rule(a));
            return Term::compound(t.name(), std::move(args));
        };
        ConstraintAtom pattern{"leq", {to_rule(pgen.term()), to_rule(pgen.term())},
                               ConstraintAtom::Kind::chr};
        MatchSubst theta;
        auto ids = s.candidates(pattern, theta, b);
        for (const auto& [id, ic] : s.live()) {
            MatchSubst probe;
            if (match_atom(pattern, ic.atom, b, probe))
                require(std::find(ids.begin(), ids.end(), id) != ids.end(),
                        "candidates missed a matching constraint");
        }
    }
}

void property_undo_replay() {
    std::mt19937_64 rng(333);
    for (int round = 0; round < 1000; ++round) {
        TermGen gen(rng());
        gen.var_pool = 5;
        Bindings b;
        struct Op {
            Term t1, t2;
        };
        std::vector<Op> survivors;
        std::vector<std::pair<Checkpoint, std::size_t>> marks;
        for (int step = 0; step < 10; ++step) {
            switch (rng() % 4) {
                case 0: marks.emplace_back(b.checkpoint(), survivors.size()); break;
                case 1:
                    if (!marks.empty()) {
                        b.undo_to(marks.back().first);
                        survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(marks.back().second), survivors.end());
                        marks.pop_back();
                        break;
                    }
                    [[fallthrough]];
                default: {
                    Term t1 = gen.term(), t2 = gen.term();
                    if (b.unify(t1, t2)) survivors.push_back({t1, t2});
                }
            }
        }
        Bindings replay;
        for (const Op& op : survivors)
            require(replay.unify(op.t1, op.t2), "surviving unification fails on replay");
        for (VarId v = 0; v < 5; ++v) {
            require(b.is_bound(v) == replay.is_bound(v), "bound set differs after replay");
            if (b.is_bound(v))
                require(b.expand(Term::var(v)).equals(replay.expand(Term::var(v))),
                        "binding differs after replay");
        }
    }
}

void property_equivalence_relation() {
    std::mt19937_64 rng(444);
    for (int round = 0; round < 1000; ++round) {
        std::uint64_t seed = rng();
        auto build = [&](bool permute) {
            TermGen gen(seed);
            gen.var_pool = 3;
            VarTable vars;
            Query q = parse_query("p(Q)", vars);
            ExecutionState st = make_initial_state({}, vars, q.vars);
            std::vector<ConstraintAtom> atoms;
            int n = 1 + static_cast<int>(seed % 3);
            for (int i = 0; i < n; ++i)
                atoms.push_back(ConstraintAtom{"leq", {gen.term(), gen.term()},
                                               ConstraintAtom::Kind::chr});
            if (permute) {
                std::reverse(atoms.begin(), atoms.end());
                st.vars.fresh();
            }
            std::map<VarId, VarId> remap;
            std::function<Term(const Term&)> lift = [&](const Term& t) -> Term {
                if (t.is_var()) {
                    auto it = remap.find(t.var_id());
                    if (it == remap.end()) it = remap.emplace(t.var_id(), st.vars.fresh()).first;
                    return Term::var(it->second);
                }
                if (!t.is_compound()) return t;
                std::vector<Term> args;
                for (const Term& a : t.args()) args.push_back(lift(a));
                return Term::compound(t.name(), std::move(args));
            };
            for (const ConstraintAtom& a : atoms) {
                ConstraintAtom lifted = a;
                for (Term& t : lifted.args) t = lift(t);
                introduce_in_state(st, lifted);
            }
            st.status = ExecutionState::Status::final_state;
            return st;
        };
        ExecutionState a = build(false), b = build(true), c = build(true);
        require(states_equivalent(a, a), "equivalence not reflexive");
        require(states_equivalent(a, b) && states_equivalent(b, a),
                "equivalence not symmetric on a renamed pair");
        require(states_equivalent(b, c) && states_equivalent(a, c),
                "equivalence not transitive");
    }
}

void criterion_properties() {
    property_unify_oracle();
    property_match_purity();
    property_store_coherence();
    property_candidates_complete();
    property_undo_replay();
    property_equivalence_relation();
}

} // namespace

int main() {
    criterion("criterion 1: leq derivation (refined and theoretical-first)",
              criterion_leq_derivation);
    criterion("criterion 2: primes vs sieve oracle (n=2..50, n=1000 indexed)", criterion_primes);
    criterion("criterion 3: coin nondeterminism (exactly 2 normal forms)", criterion_coin);
    criterion("criterion 4: dijkstra priorities vs shortest-path oracle (25 digraphs)",
              criterion_dijkstra);
    criterion("criterion 5: refined/theoretical agreement on confluent corpus programs",
              criterion_agreement);
    criterion("criterion 6: confluence checker verdicts (leq, p/q/r, coin)",
              criterion_confluence);
    criterion("criterion 7: propagation-history termination (5-var ground leq)",
              criterion_history_termination);
    criterion("criterion 8: property suites at 1000 random cases each", criterion_properties);
    if (failures > 0) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
