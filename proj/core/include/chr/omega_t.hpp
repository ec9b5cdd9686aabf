/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_OMEGA_T_HPP
#define CHRKIT_OMEGA_T_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "chr/matching.hpp"
#include "chr/program.hpp"
#include "chr/state.hpp"

namespace chr {

enum class StepKind : std::uint8_t {
    solve,
    introduce,
    apply,
    activate,   // refined/priority engines only
    reactivate, //
    pop,        //
    schedule,   // priority engine only
};

const char* step_kind_name(StepKind k);

/// One transition. `detail` pins the step for replay: terms render with the
/// run's variable names, so replaying the same program/query reproduces the
/// exact strings. Line format: `<step#> <kind> <detail>`, e.g.
///   3 apply antisymmetry [1,2] {X->A,Y->B}
struct TransitionLabel {
    StepKind kind;
    std::string detail;
    std::string rule_name;          // apply
    std::vector<ConstraintId> ids;  // apply: kept++removed head order
    ConstraintId id = 0;            // introduce/activate/reactivate/pop/schedule
    std::int64_t priority = 0;      // schedule

    std::string render(std::size_t step_no) const;
};

std::string render_trace(const std::vector<TransitionLabel>& trace);

/// Resolves the nondeterminism of omega-t: `first` takes the leftmost goal
/// transition, then textually-first rule with index-order partners; `random`
/// draws uniformly among enabled transitions with a reproducible seed.
struct Strategy {
    enum class Policy : std::uint8_t { first, random } policy = Policy::first;
    std::uint64_t seed = 0;

    static Strategy first() { return {Policy::first, 0}; }
    static Strategy random(std::uint64_t seed) { return {Policy::random, seed}; }
};

/// All omega-t transitions enabled in `st`: Solve per built-in goal atom,
/// Introduce per CHR goal atom, Apply per rule instance with a fresh history
/// tuple and holding guard. Each successor is an independent snapshot.
/// An empty result on a consistent state means the state is final.
std::vector<std::pair<TransitionLabel, ExecutionState>> successors(const Program& program,
                                                                   const ExecutionState& st);

enum class Outcome : std::uint8_t { final_state, failed, out_of_fuel, error };

struct RunResult {
    Outcome outcome = Outcome::final_state;
    ExecutionState state;
    std::vector<TransitionLabel> trace;
    std::string error;
};

constexpr std::size_t kDefaultRunFuel = 10000;
constexpr std::size_t kDefaultExploreFuel = 100000;
constexpr std::size_t kDefaultEngineFuel = 1000000;

/// Applies strategy-selected transitions until no successor (final),
/// inconsistency (failed) or fuel exhaustion. Each transition costs 1 fuel.
RunResult run(const Program& program, ExecutionState initial, Strategy strategy,
              std::size_t fuel = kDefaultRunFuel);

struct NormalForm {
    std::string key; // canonical modulo variable/id renaming
    ExecutionState state;
    std::vector<TransitionLabel> trace; // replayable path from the initial state
};

struct ExploreResult {
    std::vector<NormalForm> normal_forms; // sorted by key
    bool truncated = false;
};

/// Breadth-first exhaustive exploration of every derivation, deduplicating
/// states modulo renaming. Terminal states (final or failed) become normal
/// forms; all failed branches collapse into the single "FAIL" form.
ExploreResult explore_all(const Program& program, const ExecutionState& initial,
                          std::size_t state_fuel = kDefaultExploreFuel);

/// Resumable breadth-first exploration; explore_all drains one of these.
/// The joinability search interleaves two explorers so a common normal form
/// is found without exhausting the (possibly infinite) state space.
class Explorer {
public:
    Explorer(const Program& program, ExecutionState initial);
    /// Processes one queued state. Returns the key of a newly found normal
    /// form, "" for a step without one; nullopt when the queue is empty.
    std::optional<std::string> step();
    bool exhausted() const { return queue_.empty(); }
    std::size_t explored() const { return explored_; }
    const std::map<std::string, NormalForm>& normal_forms() const { return forms_; }

private:
    struct Node {
        ExecutionState state;
        std::vector<TransitionLabel> trace;
    };
    const Program& program_;
    std::deque<Node> queue_;
    std::unordered_set<std::string> seen_;
    std::map<std::string, NormalForm> forms_;
    std::size_t explored_ = 0;
};

/// Replays the solve/introduce/apply events of a trace from `initial`,
/// checking each is an enabled omega-t transition (other event kinds are
/// skipped). Returns false at the first invalid step.
bool validate_trace(const Program& program, ExecutionState initial,
                    const std::vector<TransitionLabel>& trace,
                    ExecutionState* final_out = nullptr);

// label construction shared by the engines
TransitionLabel make_solve_label(const ExecutionState& st, const ConstraintAtom& atom);
TransitionLabel make_introduce_label(const ExecutionState& st, const ConstraintAtom& atom);
TransitionLabel make_apply_label(const ExecutionState& st, const Rule& rule,
                                 const std::vector<ConstraintId>& ids, const MatchSubst& theta);

} // namespace chr

#endif // CHRKIT_OMEGA_T_HPP
