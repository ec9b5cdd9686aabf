/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include <benchmark/benchmark.h>

#include "chr/parser.hpp"
#include "chr/priority.hpp"
#include "chr/refined.hpp"

namespace {

using namespace chr;

const char* kPrimes = "generate @ upto(N) <=> N > 1 | prime(N), upto(N-1).\n"
                      "done @ upto(1) <=> true.\n"
                      "remove_nonprime @ prime(A) \\ prime(B) <=> B mod A =:= 0 | true.";

const char* kLeq = "reflexivity @ leq(X,X) <=> true.\n"
                   "antisymmetry @ leq(X,Y), leq(Y,X) <=> X = Y.\n"
                   "idempotence @ leq(X,Y) \\ leq(X,Y) <=> true.\n"
                   "transitivity @ leq(X,Y), leq(Y,Z) ==> leq(X,Z).";

ExecutionState state_for(const std::string& query) {
    VarTable vars;
    Query q = parse_query(query, vars);
    return make_initial_state(q.atoms, std::move(vars), q.vars);
}

void BM_PrimesRefined(benchmark::State& state) {
    Program p = parse_program(kPrimes);
    std::string query = "upto(" + std::to_string(state.range(0)) + ")";
    for (auto _ : state) {
        RunResult r = run_refined(p, state_for(query), 10000000);
        benchmark::DoNotOptimize(r.state.store.size());
    }
}
BENCHMARK(BM_PrimesRefined)->Arg(100)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LeqClosureRefined(benchmark::State& state) {
    Program p = parse_program(kLeq);
    std::string query;
    auto n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            if (!query.empty()) query += ", ";
            query += "leq(v" + std::to_string(i) + ",v" + std::to_string(j) + ")";
        }
    for (auto _ : state) {
        RunResult r = run_refined(p, state_for(query), 1000000);
        benchmark::DoNotOptimize(r.trace.size());
    }
}
BENCHMARK(BM_LeqClosureRefined)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_StoreIntroduceRemove(benchmark::State& state) {
    Bindings b;
    for (auto _ : state) {
        Store s;
        PropagationHistory h;
        std::vector<ConstraintId> ids;
        for (int i = 0; i < 1000; ++i)
            ids.push_back(s.introduce(
                ConstraintAtom{"prime", {Term::integer(i)}, ConstraintAtom::Kind::chr}, b));
        for (ConstraintId id : ids) s.remove(id, h);
        benchmark::DoNotOptimize(s.next_id());
    }
}
BENCHMARK(BM_StoreIntroduceRemove)->Unit(benchmark::kMicrosecond);

void BM_UnifyUndo(benchmark::State& state) {
    Term big = Term::atom("leaf");
    for (int i = 0; i < 50; ++i) big = Term::compound("f", {big, Term::var(i)});
    Term pat = Term::atom("leaf");
    for (int i = 0; i < 50; ++i) pat = Term::compound("f", {pat, Term::var(100 + i)});
    for (auto _ : state) {
        Bindings b;
        Checkpoint mark = b.checkpoint();
        benchmark::DoNotOptimize(b.unify(big, pat));
        b.undo_to(mark);
    }
}
BENCHMARK(BM_UnifyUndo)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
