/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "chr/omega_t.hpp"
#include "chr/parser.hpp"
#include "chr/printer.hpp"
#include "test_support.hpp"

using namespace chr;
using namespace testsup;

namespace {

const char* kLeq = "reflexivity @ leq(X,X) <=> true.\n"
                   "antisymmetry @ leq(X,Y), leq(Y,X) <=> X = Y.\n"
                   "idempotence @ leq(X,Y) \\ leq(X,Y) <=> true.\n"
                   "transitivity @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).";

const char* kPrimes = "generate @ upto(N) <=> N > 1 | prime(N), upto(N-1).\n"
                      "done @ upto(1) <=> true.\n"
                      "remove_nonprime @ prime(A) \\ prime(B) <=> B mod A =:= 0 | true.";

const char* kCoin = "head @ throw(Coin) <=> Coin = head.\n"
                    "tail @ throw(Coin) <=> Coin = tail.";

std::set<std::int64_t> store_ints(const ExecutionState& st, const std::string& symbol) {
    std::set<std::int64_t> out;
    for (const auto& [id, ic] : st.store.live()) {
        if (ic.atom.symbol != symbol) continue;
        Term v = st.bindings.resolve(ic.atom.args[0]);
        REQUIRE(v.is_int());
        out.insert(v.int_value());
    }
    return out;
}

} // namespace

TEST_CASE("successors: a chr goal atom yields exactly one Introduce") {
    Program p = parse_program(kLeq);
    ExecutionState st = state_for("leq(a,a)");
    auto succ = successors(p, st);
    REQUIRE(succ.size() == 1);
    CHECK(succ[0].first.kind == StepKind::introduce);
    CHECK(succ[0].second.store.size() == 1);
}

TEST_CASE("successors: antisymmetry enabled on a symmetric pair") {
    Program p = parse_program(kLeq);
    ExecutionState st = state_for("leq(A,B),leq(B,A)");
    // introduce both atoms first
    for (int i = 0; i < 2; ++i) {
        auto succ = successors(p, st);
        st = succ[0].second;
    }
    auto succ = successors(p, st);
    bool antisym_found = false;
    for (auto& [lab, next] : succ) {
        if (lab.kind != StepKind::apply) continue;
        if (lab.rule_name == "antisymmetry") {
            antisym_found = true;
            REQUIRE(next.goal.size() == 1);
            CHECK(next.goal[0].symbol == "=");
            CHECK(next.store.size() == 0);
        }
    }
    CHECK(antisym_found);
}

TEST_CASE("successors: two overlapping simplifications give two Apply transitions") {
    Program p = parse_program("r1 @ p <=> q. r2 @ p <=> r.");
    ExecutionState st = state_for("p");
    st = successors(p, st)[0].second; // introduce p#1
    auto succ = successors(p, st);
    REQUIRE(succ.size() == 2);
    CHECK(succ[0].first.rule_name == "r1");
    CHECK(succ[1].first.rule_name == "r2");
}

TEST_CASE("run: leq triangle closes to equality under the first strategy") {
    Program p = parse_program(kLeq);
    RunResult r = run(p, state_for("leq(A,B),leq(B,C),leq(C,A)"), Strategy::first());
    REQUIRE(r.outcome == Outcome::final_state);
    CHECK(r.state.store.size() == 0);
    Term a = r.state.bindings.resolve(Term::var(r.state.query_vars[0]));
    Term b = r.state.bindings.resolve(Term::var(r.state.query_vars[1]));
    Term c = r.state.bindings.resolve(Term::var(r.state.query_vars[2]));
    CHECK(a.equals(b));
    CHECK(b.equals(c));
}

TEST_CASE("run: primes upto(4) sieves to {2,3} under both strategies") {
    Program p = parse_program(kPrimes);
    for (Strategy s : {Strategy::first(), Strategy::random(7), Strategy::random(99)}) {
        RunResult r = run(p, state_for("upto(4)"), s);
        REQUIRE(r.outcome == Outcome::final_state);
        CHECK(store_ints(r.state, "prime") == std::set<std::int64_t>{2, 3});
        CHECK(store_ints(r.state, "upto").empty());
    }
}

TEST_CASE("run: empty program stores the query") {
    Program p = parse_program("");
    RunResult r = run(p, state_for("c"), Strategy::first());
    REQUIRE(r.outcome == Outcome::final_state);
    REQUIRE(r.state.store.size() == 1);
    CHECK(r.state.store.live().begin()->second.atom.symbol == "c");
}

TEST_CASE("run: fuel exhaustion is a value") {
    Program p = parse_program(kPrimes);
    RunResult r = run(p, state_for("upto(30)"), Strategy::first(), 3);
    CHECK(r.outcome == Outcome::out_of_fuel);
    CHECK(r.trace.size() == 3);
}

TEST_CASE("run: replay determinism for seeded strategies") {
    Program p = parse_program(kPrimes);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        RunResult r1 = run(p, state_for("upto(10)"), Strategy::random(seed));
        RunResult r2 = run(p, state_for("upto(10)"), Strategy::random(seed));
        REQUIRE(r1.trace.size() == r2.trace.size());
        CHECK(render_trace(r1.trace) == render_trace(r2.trace));
        CHECK(nf_key(r1.state) == nf_key(r2.state));
    }
}

TEST_CASE("run traces replay as valid derivations (step validity)") {
    Program leq = parse_program(kLeq);
    Program primes = parse_program(kPrimes);
    struct Case {
        const Program* p;
        const char* query;
        Strategy strategy;
    } cases[] = {
        {&leq, "leq(A,B),leq(B,C),leq(C,A)", Strategy::first()},
        {&leq, "leq(A,B),leq(B,A)", Strategy::random(4)},
        {&primes, "upto(12)", Strategy::first()},
        {&primes, "upto(9)", Strategy::random(11)},
    };
    for (const Case& c : cases) {
        CAPTURE(c.query);
        RunResult r = run(*c.p, state_for(c.query), c.strategy);
        REQUIRE(r.outcome == Outcome::final_state);
        ExecutionState final_state = state_for("");
        CHECK(validate_trace(*c.p, state_for(c.query), r.trace, &final_state));
        CHECK(nf_key(final_state) == nf_key(r.state));
    }
}

TEST_CASE("history discipline: no apply label repeats its (rule, ids) tuple") {
    Program p = parse_program(kLeq);
    RunResult r = run(p, state_for("leq(A,B),leq(B,C),leq(C,A)"), Strategy::first());
    std::set<std::pair<std::string, std::vector<ConstraintId>>> seen;
    for (const TransitionLabel& lab : r.trace) {
        if (lab.kind != StepKind::apply) continue;
        CHECK(seen.insert({lab.rule_name, lab.ids}).second);
    }
}

TEST_CASE("goal conservation across a completed derivation") {
    Program p = parse_program(kPrimes);
    RunResult r = run(p, state_for("upto(6)"), Strategy::first());
    REQUIRE(r.outcome == Outcome::final_state);
    // every goal atom (initial + bodies) is consumed by exactly one
    // solve or introduce
    std::size_t consumed = 0, produced = 1; // initial goal had one atom
    for (const TransitionLabel& lab : r.trace) {
        if (lab.kind == StepKind::solve || lab.kind == StepKind::introduce) ++consumed;
        if (lab.kind == StepKind::apply) {
            for (const Rule& rule : p.rules())
                if (rule.name == lab.rule_name) produced += rule.body.size();
        }
    }
    CHECK(consumed == produced);
}

TEST_CASE("explore_all: coin has exactly two normal forms") {
    Program p = parse_program(kCoin);
    ExploreResult e = explore_all(p, state_for("throw(C)"));
    CHECK_FALSE(e.truncated);
    REQUIRE(e.normal_forms.size() == 2);
    for (const NormalForm& nf : e.normal_forms) {
        CHECK(nf.state.store.size() == 0);
        // the traces replay
        CHECK(validate_trace(p, state_for("throw(C)"), nf.trace));
    }
    CHECK(e.normal_forms[0].key != e.normal_forms[1].key);
}

TEST_CASE("explore_all: leq symmetric pair has one normal form") {
    Program p = parse_program(kLeq);
    ExploreResult e = explore_all(p, state_for("leq(A,B),leq(B,A)"), 3000);
    // pure-transitivity branches diverge, so the search truncates, but the
    // single joint normal form is found early
    REQUIRE(e.normal_forms.size() == 1);
    const ExecutionState& st = e.normal_forms[0].state;
    CHECK(st.store.size() == 0);
    CHECK(st.bindings.resolve(Term::var(st.query_vars[0]))
              .equals(st.bindings.resolve(Term::var(st.query_vars[1]))));
}

TEST_CASE("explore_all: empty goal yields the empty normal form") {
    Program p = parse_program(kLeq);
    ExploreResult e = explore_all(p, state_for(""));
    CHECK_FALSE(e.truncated);
    REQUIRE(e.normal_forms.size() == 1);
    CHECK(e.normal_forms[0].state.store.size() == 0);
}

TEST_CASE("explore_all honors its state budget") {
    Program p = parse_program(kLeq);
    ExploreResult e = explore_all(p, state_for("leq(A,B),leq(B,A)"), 10);
    CHECK(e.truncated);
}
