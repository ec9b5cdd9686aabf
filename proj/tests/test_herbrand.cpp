/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "chr/herbrand.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "test_support.hpp"

using namespace chr;
using namespace testsup;

namespace {

Term rv(VarId id) { return Term::var(id, true); }   // rule variable
Term sv(VarId id) { return Term::var(id, false); }  // store/runtime variable

ConstraintAtom chr_atom(const std::string& sym, std::vector<Term> args) {
    return {sym, std::move(args), ConstraintAtom::Kind::chr};
}
ConstraintAtom builtin(const std::string& sym, std::vector<Term> args) {
    return {sym, std::move(args), ConstraintAtom::Kind::builtin};
}

} // namespace

TEST_CASE("unify basics") {
    Bindings b;
    CHECK(b.unify(sv(0), Term::atom("a")));
    CHECK(b.resolve(sv(0)).name() == "a");

    Bindings b2;
    CHECK_FALSE(b2.unify(Term::atom("a"), Term::atom("b")));
    CHECK(b2.trail_size() == 0); // auto-undo on failure

    Bindings b3;
    Term lhs = Term::compound("f", {sv(0), Term::atom("b")});
    Term rhs = Term::compound("f", {Term::atom("a"), sv(1)});
    CHECK(b3.unify(lhs, rhs));
    CHECK(b3.resolve(sv(0)).name() == "a");
    CHECK(b3.resolve(sv(1)).name() == "b");
}

TEST_CASE("unify agrees with the naive recursive-descent oracle on 1000 random pairs") {
    TermGen gen(20260810);
    int successes = 0;
    for (int i = 0; i < 1000; ++i) {
        Term t1 = gen.term();
        Term t2 = gen.term();
        Bindings b;
        bool impl_ok = b.unify(t1, t2);
        auto oracle = naive_unify(t1, t2);
        CAPTURE(print_canonical(t1));
        CAPTURE(print_canonical(t2));
        REQUIRE(impl_ok == oracle.has_value());
        if (impl_ok) {
            ++successes;
            // deep comparison only for finite (acyclic) unifiers; the naive
            // oracle would loop applying a cyclic substitution
            Bindings strict(true);
            if (strict.unify(t1, t2)) {
                CHECK(variants(b.expand(t1), oracle->apply(t1)));
                CHECK(b.expand(t1).equals(b.expand(t2)));
            }
        }
    }
    CHECK(successes > 100); // the generator produces plenty of both outcomes
}

TEST_CASE("unify succeeds iff some grounding equalizes (small-scale brute force)") {
    // finite-tree semantics: the occurs check is on, since cyclic unifiers
    // have no finite grounding
    TermGen gen(42);
    gen.max_depth = 2;
    gen.var_pool = 2;
    gen.atom_count = 2; // leaves restricted to the enumerated universe
    gen.int_range = 1;
    // the universe nests as deep as the generated terms, so a variable can
    // take the value of a whole opposite side
    std::vector<Term> universe = enumerate_ground(3);
    auto uses_var = [](const Term& t, VarId v) {
        std::function<bool(const Term&)> rec = [&](const Term& x) {
            if (x.is_var()) return x.var_id() == v;
            for (const Term& a : x.args())
                if (rec(a)) return true;
            return false;
        };
        return rec(t);
    };
    Term unit = Term::atom("a");
    for (int i = 0; i < 200; ++i) {
        Term t1 = gen.term();
        Term t2 = gen.term();
        Bindings b(true);
        bool impl_ok = b.unify(t1, t2);

        bool v0 = uses_var(t1, 0) || uses_var(t2, 0);
        bool v1 = uses_var(t1, 1) || uses_var(t2, 1);
        std::vector<Term> dom0 = v0 ? universe : std::vector<Term>{unit};
        std::vector<Term> dom1 = v1 ? universe : std::vector<Term>{unit};
        bool grounding_found = false;
        for (const Term& g0 : dom0) {
            for (const Term& g1 : dom1) {
                NaiveSubst s;
                s.m.emplace(0, g0);
                s.m.emplace(1, g1);
                if (s.apply(t1).equals(s.apply(t2))) {
                    grounding_found = true;
                    // most general: the grounding instantiates the mgu
                    if (impl_ok) {
                        std::map<VarId, Term> m;
                        CHECK(instance_of(b.expand(t1), s.apply(t1), m));
                    }
                    break;
                }
            }
            if (grounding_found) break;
        }
        CAPTURE(print_canonical(t1));
        CAPTURE(print_canonical(t2));
        CHECK(impl_ok == grounding_found);
    }
}

TEST_CASE("occurs check is off by default and switchable") {
    Bindings loose;
    CHECK(loose.unify(sv(0), Term::compound("f", {sv(0)})));
    CHECK(loose.is_ground(sv(0)) == false); // cyclic, conservatively nonground

    Bindings strict(true);
    CHECK_FALSE(strict.unify(sv(0), Term::compound("f", {sv(0)})));
}

TEST_CASE("match examples") {
    Bindings b;
    MatchSubst theta;
    // repeated-variable pattern against equal atoms
    CHECK(match_atom(chr_atom("leq", {rv(0), rv(0)}),
                     chr_atom("leq", {Term::atom("a"), Term::atom("a")}), b, theta));
    CHECK(theta.lookup(0)->name() == "a");

    MatchSubst theta2;
    CHECK_FALSE(match_atom(chr_atom("leq", {rv(0), rv(0)}),
                           chr_atom("leq", {Term::atom("a"), Term::atom("b")}), b, theta2));

    // pattern variables may capture store variables without binding them
    MatchSubst theta3;
    CHECK(match_atom(chr_atom("leq", {rv(0), rv(1)}), chr_atom("leq", {sv(5), sv(5)}), b,
                     theta3));
    CHECK(theta3.lookup(0)->var_id() == 5);
    CHECK(theta3.lookup(1)->var_id() == 5);
    CHECK(b.trail_size() == 0);

    // a nonvar pattern position never binds an unbound store variable
    MatchSubst theta4;
    CHECK_FALSE(match_atom(chr_atom("leq", {Term::atom("a"), rv(0)}),
                           chr_atom("leq", {sv(7), Term::atom("b")}), b, theta4));
}

TEST_CASE("match soundness and purity on random cases") {
    TermGen gen(7);
    for (int i = 0; i < 1000; ++i) {
        // build a store atom and a rule pattern over its shape
        Term cand = gen.term();
        Term pat = gen.term();
        // relabel pattern vars as rule-scoped
        std::function<Term(const Term&)> to_rule = [&](const Term& t) -> Term {
            if (t.is_var()) return rv(t.var_id());
            if (!t.is_compound()) return t;
            std::vector<Term> args;
            for (const Term& a : t.args()) args.push_back(to_rule(a));
            return Term::compound(t.name(), std::move(args));
        };
        Bindings b;
        std::uint64_t gen_before = b.generation();
        MatchSubst theta;
        bool ok = match_term(to_rule(pat), cand, b, theta);
        CHECK(b.generation() == gen_before); // matching never tells
        if (ok) {
            // applying theta to the pattern reproduces the candidate
            VarTable vars;
            std::unordered_map<VarId, VarId> fresh;
            Term applied = instantiate(to_rule(pat), theta, vars, fresh);
            CHECK(b.expand(applied).equals(b.expand(cand)));
        }
    }
}

TEST_CASE("eval_arith follows the fixed vocabulary") {
    Bindings b;
    auto eval = [&](const char* text) {
        VarTable vars;
        Query q = parse_query(std::string("p(") + text + ")", vars);
        return eval_arith(q.atoms[0].args[0], b);
    };
    CHECK(eval("7-1").value == 6);
    CHECK(eval("9 mod 3").value == 0);
    CHECK(eval("2+3*4").value == 14);
    CHECK(eval("-4").value == -4);
    CHECK(eval("X+1").status == ArithStatus::nonground);
    CHECK(eval("a+1").status == ArithStatus::type_error);
    CHECK(eval("5 mod 0").status == ArithStatus::type_error);

    // floored modulo: result takes the divisor's sign; note mod binds
    // tighter than binary minus
    VarTable vars;
    Query q = parse_query("p((0-7) mod 3, 7 mod (0-3), 0-7 mod 3)", vars);
    CHECK(eval_arith(q.atoms[0].args[0], b).value == 2);
    CHECK(eval_arith(q.atoms[0].args[1], b).value == -2);
    CHECK(eval_arith(q.atoms[0].args[2], b).value == -1);
}

TEST_CASE("check_guard examples and purity") {
    Bindings b;
    MatchSubst empty;
    CHECK(check_guard({builtin("=:=", {Term::compound("mod", {Term::integer(4), Term::integer(2)}),
                                       Term::integer(0)})},
                      empty, b) == GuardStatus::holds);
    CHECK(check_guard({builtin("true", {})}, empty, b) == GuardStatus::holds);

    // == through theta onto the same store variable
    MatchSubst theta;
    theta.bind(0, sv(3));
    theta.bind(1, sv(3));
    std::uint64_t gen_before = b.generation();
    CHECK(check_guard({builtin("==", {rv(0), rv(1)})}, theta, b) == GuardStatus::holds);
    CHECK(check_guard({builtin("\\==", {rv(0), rv(1)})}, theta, b) == GuardStatus::fails);
    CHECK(b.generation() == gen_before);

    // unbound comparison operand
    MatchSubst theta2;
    theta2.bind(0, sv(4));
    CHECK(check_guard({builtin("<", {rv(0), Term::integer(3)})}, theta2, b) ==
          GuardStatus::nonground);
}

TEST_CASE("checkpoint and undo restore exact binding state") {
    Bindings b;
    Checkpoint m = b.checkpoint();
    CHECK(b.unify(sv(0), Term::atom("a")));
    CHECK(b.is_bound(0));
    b.undo_to(m);
    CHECK_FALSE(b.is_bound(0));

    // nested LIFO marks
    CHECK(b.unify(sv(1), Term::atom("b")));
    Checkpoint m1 = b.checkpoint();
    CHECK(b.unify(sv(2), Term::atom("c")));
    Checkpoint m2 = b.checkpoint();
    CHECK(b.unify(sv(3), Term::atom("d")));
    b.undo_to(m2);
    CHECK(b.is_bound(2));
    CHECK_FALSE(b.is_bound(3));
    b.undo_to(m1);
    CHECK(b.is_bound(1));
    CHECK_FALSE(b.is_bound(2));
}

TEST_CASE("1000 random unify/undo interleavings equal replaying the survivors") {
    std::mt19937_64 rng(99);
    for (int round = 0; round < 1000; ++round) {
        TermGen gen(rng());
        gen.var_pool = 5;
        Bindings b;
        struct Op {
            Term t1, t2;
        };
        std::vector<Op> survivors;
        std::vector<std::pair<Checkpoint, std::size_t>> marks; // (mark, survivor count)
        int steps = 2 + static_cast<int>(rng() % 12);
        for (int s = 0; s < steps; ++s) {
            switch (rng() % 4) {
                case 0:
                    marks.emplace_back(b.checkpoint(), survivors.size());
                    break;
                case 1:
                    if (!marks.empty()) {
                        auto [mark, count] = marks.back();
                        marks.pop_back();
                        b.undo_to(mark);
                        survivors.erase(survivors.begin() + static_cast<std::ptrdiff_t>(count), survivors.end());
                        break;
                    }
                    [[fallthrough]];
                default: {
                    Term t1 = gen.term(), t2 = gen.term();
                    if (b.unify(t1, t2)) survivors.push_back({t1, t2});
                    break;
                }
            }
        }
        Bindings replay;
        for (const Op& op : survivors) CHECK(replay.unify(op.t1, op.t2));
        for (VarId v = 0; v < 5; ++v) {
            CHECK(b.is_bound(v) == replay.is_bound(v));
            if (b.is_bound(v)) CHECK(b.expand(sv(v)).equals(replay.expand(sv(v))));
        }
    }
}

TEST_CASE("guard purity holds for every guard over random states") {
    TermGen gen(123);
    for (int i = 0; i < 1000; ++i) {
        Bindings b;
        // bind a couple of variables first
        b.unify(sv(0), gen.term());
        b.unify(sv(1), gen.term());
        MatchSubst theta;
        theta.bind(0, sv(0));
        theta.bind(1, sv(1));
        std::uint64_t gen_before = b.generation();
        ConstraintAtom g = builtin(i % 2 == 0 ? "==" : "\\==", {rv(0), rv(1)});
        check_guard({g}, theta, b);
        CHECK(b.generation() == gen_before);
    }
}
