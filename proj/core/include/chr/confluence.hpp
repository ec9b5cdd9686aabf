/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_CONFLUENCE_HPP
#define CHRKIT_CONFLUENCE_HPP

#include <string>
#include <vector>

#include "chr/omega_t.hpp"

namespace chr {

/// A minimal overlap of two rule instances sharing at least one head
/// constraint (via mgu), where the shared portion meets a removed head.
/// The overlap's built-in store is the mgu plus both guards' equations;
/// pairs with unsatisfiable guards are never constructed.
struct CriticalPair {
    std::size_t rule1 = 0;
    std::size_t rule2 = 0;
    ExecutionState overlap;
    std::string overlap_print; // canonical store snapshot of the overlap
    TransitionLabel step1, step2;
    ExecutionState succ1, succ2;
    /// Set when a guard contains a comparison that is not ground over the
    /// overlap: the pair cannot be decided and is reported inconclusive.
    bool guard_undecided = false;
};

std::vector<CriticalPair> critical_pairs(const Program& program);

enum class PairVerdict : std::uint8_t { joins, distinct, inconclusive };

struct PairRecord {
    std::string rule1, rule2;
    std::string overlap_print;
    PairVerdict verdict = PairVerdict::joins;
    std::string note; // "fuel" / "guard" for inconclusive pairs
    // witnesses for a distinct verdict: one terminal state per side, with
    // machine-replayable traces from the overlap state
    std::string witness1_key, witness2_key;
    std::vector<TransitionLabel> witness1_trace, witness2_trace;
};

/// Explores from both successors; the pair joins iff the normal-form sets
/// intersect under state equivalence (sound for terminating programs).
PairRecord joinable(const Program& program, const CriticalPair& pair,
                    std::size_t fuel = kDefaultExploreFuel);

/// Both failed, or a bijective renaming of internal variables and ids makes
/// the canonical prints of (store, builtins restricted to the shared external
/// variables) coincide.
bool states_equivalent(const ExecutionState& a, const ExecutionState& b);

struct ConfluenceReport {
    enum class Verdict : std::uint8_t { confluent, non_joinable, inconclusive };
    Verdict verdict = Verdict::confluent;
    std::vector<PairRecord> pairs; // sorted by (rule1, rule2, overlap)

    std::string summary_line() const;
    /// Line-oriented machine format: `PAIR <r1> <r2> <overlap> <verdict>`.
    std::string machine_text() const;
};

/// Aggregates joinability over all critical pairs. The caller asserts the
/// program terminates; fuel guards the search.
ConfluenceReport check_confluence(const Program& program,
                                  std::size_t fuel = kDefaultExploreFuel);

} // namespace chr

#endif // CHRKIT_CONFLUENCE_HPP
