/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_STATE_HPP
#define CHRKIT_STATE_HPP

#include <string>
#include <vector>

#include "chr/bindings.hpp"
#include "chr/program.hpp"
#include "chr/store.hpp"

namespace chr {

/// The omega-t execution state <G, S, B, T>_n plus the variable table of the
/// run and the query (external) variables, which printing and state
/// equivalence treat as non-renameable.
struct ExecutionState {
    enum class Status { running, final_state, failed };

    std::vector<ConstraintAtom> goal;
    Store store;
    Bindings bindings;
    PropagationHistory history;
    VarTable vars;
    std::vector<VarId> query_vars;
    Status status = Status::running;

    bool failed() const { return status == Status::failed; }
};

ExecutionState make_initial_state(const std::vector<ConstraintAtom>& goal_atoms, VarTable vars,
                                  std::vector<VarId> query_vars, bool occurs_check = false);

/// Solves one built-in constraint in place. On success returns true and
/// appends to reactivate the ids attached to any variable the built-in bound
/// (collected before reindexing). On failure the state is marked failed.
/// Nonground or type-errored comparisons fail the derivation.
bool solve_in_state(ExecutionState& st, const ConstraintAtom& atom,
                    std::vector<ConstraintId>* reactivate = nullptr);

/// Moves a CHR constraint into the store with ground arithmetic subterms of
/// its arguments folded. Returns the new id.
ConstraintId introduce_in_state(ExecutionState& st, const ConstraintAtom& atom);

/// Fires a rule instance: records the history tuple, removes the matched
/// removed-head constraints, and returns the instantiated body (body-local
/// variables get fresh runtime variables). The caller decides where the body
/// goes (goal multiset, frame stack, batch queue).
std::vector<ConstraintAtom> apply_in_state(ExecutionState& st, const Rule& rule,
                                           const std::vector<ConstraintId>& ids,
                                           const MatchSubst& theta);

/// Canonical key of a running state, invariant under bijective renaming of
/// internal variables and constraint ids: store + goal + history + builtins
/// restricted to query variables. Used to deduplicate exploration.
std::string state_key(const ExecutionState& st);

/// Canonical key of a terminal state: store (as a multiset, ids dropped) and
/// builtins restricted to query variables; "FAIL" for failed states. Two
/// terminal states are equivalent iff their keys are equal.
std::string nf_key(const ExecutionState& st);

/// Renders the builtin store restricted to the query variables, one
/// equation per line (classes of equal variables joined with " = ").
std::vector<std::string> query_binding_lines(const ExecutionState& st);

} // namespace chr

#endif // CHRKIT_STATE_HPP
