/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_REFINED_HPP
#define CHRKIT_REFINED_HPP

#include "chr/omega_t.hpp"

namespace chr {

/// The refined operational semantics: goal atoms activate left to right, the
/// active (stack-top) constraint tries its occurrences in program order, rule
/// bodies run immediately left to right, and a built-in that binds a variable
/// reactivates the constraints attached to it (ascending id). Priorities are
/// ignored. The trace extends the omega-t events with activate, reactivate
/// and pop, and its solve/introduce/apply projection is a valid omega-t
/// derivation.
RunResult run_refined(const Program& program, ExecutionState initial,
                      std::size_t fuel = kDefaultEngineFuel);

} // namespace chr

#endif // CHRKIT_REFINED_HPP
