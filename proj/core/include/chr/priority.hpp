/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_PRIORITY_HPP
#define CHRKIT_PRIORITY_HPP

#include "chr/omega_t.hpp"

namespace chr {

/// The rule-priority semantics (lower number = higher priority). Goal and
/// rule bodies run in batch mode: no rule fires while unprocessed goal atoms
/// remain. Among the fireable instances, the one with the smallest evaluated
/// priority fires; ties go to rule textual order, then discovery order.
/// Dynamic priority expressions are evaluated per matched instance; a
/// priority that is nonground or non-integer at firing time is an error.
/// Rules without a priority default to 1 (the highest band).
RunResult run_priority(const Program& program, ExecutionState initial,
                       std::size_t fuel = kDefaultEngineFuel);

/// Post-hoc soundness check of a run_priority trace, replayed from the
/// initial state: at every apply of priority p no instance of priority < p
/// was applicable, and the goal multiset was empty (batch mode).
bool verify_priority_trace(const Program& program, ExecutionState initial,
                           const std::vector<TransitionLabel>& trace);

} // namespace chr

#endif // CHRKIT_PRIORITY_HPP
