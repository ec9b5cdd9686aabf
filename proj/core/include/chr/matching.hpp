/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_MATCHING_HPP
#define CHRKIT_MATCHING_HPP

#include <functional>
#include <optional>

#include "chr/program.hpp"
#include "chr/state.hpp"

namespace chr {

/// Lookup order for the remaining heads of a rule, given the head position
/// the active constraint occupies. Static per (rule, occurrence): heads with
/// more arguments fully bound by already-matched heads come first, ties go to
/// the symbol with the smaller program fan-out, then textual order.
struct JoinPlan {
    std::vector<std::size_t> order; // remaining head positions
};

JoinPlan order_partners(const Rule& rule, std::size_t active_pos, const Program& program);

/// Enumerates rule instances: distinct live constraints matched to every head
/// position, guard holding, history tuple fresh. ids are in kept++removed
/// position order. With an anchor, that head position is fixed to the given
/// constraint and partners are looked up in JoinPlan order; without one,
/// positions go textually and candidates in ascending id order.
/// The callback returns false to stop; the function returns false iff stopped.
using InstanceFn = std::function<bool(const std::vector<ConstraintId>&, const MatchSubst&)>;

bool for_each_instance(const Program& program, std::size_t rule_idx, const ExecutionState& st,
                       std::optional<std::pair<std::size_t, ConstraintId>> anchor,
                       const InstanceFn& fn);

} // namespace chr

#endif // CHRKIT_MATCHING_HPP
