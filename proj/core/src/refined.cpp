/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/refined.hpp"

#include <algorithm>
#include <variant>

#include "chr/herbrand.hpp"
#include "chr/printer.hpp"

namespace chr {

namespace {

struct GoalFrame {
    std::vector<ConstraintAtom> conjuncts;
    std::size_t next = 0;
};

struct ActFrame {
    ConstraintId id = 0;
    std::size_t occurrence = 0;
};

using Frame = std::variant<GoalFrame, ActFrame>;

std::string id_detail(const ExecutionState& st, ConstraintId id) {
    if (!st.store.is_live(id)) return "#" + std::to_string(id);
    Namer namer = Namer::preserving(st.vars);
    return print_atom(st.store.get(id).atom, &st.bindings, namer) + "#" + std::to_string(id);
}

} // namespace

RunResult run_refined(const Program& program, ExecutionState initial, std::size_t fuel) {
    RunResult result;
    result.state = std::move(initial);
    ExecutionState& st = result.state;

    // the activation stack lives on the heap, not in host recursion
    std::vector<Frame> stack;
    stack.push_back(GoalFrame{std::move(st.goal), 0});
    st.goal.clear();

    auto out_of_fuel = [&] {
        result.outcome = Outcome::out_of_fuel;
        return std::move(result);
    };
    auto spend = [&]() -> bool {
        if (fuel == 0) return false;
        --fuel;
        return true;
    };
    auto emit = [&](TransitionLabel lab) { result.trace.push_back(std::move(lab)); };

    // constraints whose variables a built-in just touched are reactivated in
    // ascending id order (pushed descending, popped ascending)
    auto push_reactivations = [&](std::vector<ConstraintId> ids) {
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        for (auto it = ids.rbegin(); it != ids.rend(); ++it) {
            if (!st.store.is_live(*it)) continue;
            TransitionLabel lab;
            lab.kind = StepKind::reactivate;
            lab.id = *it;
            lab.detail = id_detail(st, *it);
            emit(std::move(lab));
            stack.push_back(ActFrame{*it, 0});
        }
    };

    while (!stack.empty()) {
        Frame& top = stack.back();

        if (auto* goal = std::get_if<GoalFrame>(&top)) {
            if (goal->next >= goal->conjuncts.size()) {
                stack.pop_back();
                continue;
            }
            ConstraintAtom atom = goal->conjuncts[goal->next++];
            if (!spend()) return out_of_fuel();
            if (atom.is_builtin()) {
                emit(make_solve_label(st, atom));
                std::vector<ConstraintId> touched;
                if (!solve_in_state(st, atom, &touched)) {
                    result.outcome = Outcome::failed;
                    return result;
                }
                push_reactivations(std::move(touched));
            } else {
                emit(make_introduce_label(st, atom));
                ConstraintId id = introduce_in_state(st, atom);
                TransitionLabel lab;
                lab.kind = StepKind::activate;
                lab.id = id;
                lab.detail = id_detail(st, id);
                emit(std::move(lab));
                stack.push_back(ActFrame{id, 0});
            }
            continue;
        }

        auto& act = std::get<ActFrame>(top);
        if (!st.store.is_live(act.id)) {
            stack.pop_back();
            continue;
        }
        const SymbolArity key = st.store.get(act.id).atom.key();
        const std::vector<Occurrence>& occs = program.occurrences(key);
        if (act.occurrence >= occs.size()) {
            TransitionLabel lab;
            lab.kind = StepKind::pop;
            lab.id = act.id;
            lab.detail = id_detail(st, act.id);
            emit(std::move(lab));
            stack.pop_back();
            continue;
        }
        const Occurrence occ = occs[act.occurrence];
        const Rule& rule = program.rule(occ.rule_index);

        // first instance at this occurrence with the active constraint fixed
        std::vector<ConstraintId> fired_ids;
        MatchSubst fired_theta;
        for_each_instance(program, occ.rule_index, st, std::make_pair(occ.head_pos, act.id),
                          [&](const std::vector<ConstraintId>& ids, const MatchSubst& theta) {
                              fired_ids = ids;
                              fired_theta = theta;
                              return false; // stop at the first
                          });
        if (fired_ids.empty()) {
            ++act.occurrence;
            continue;
        }
        if (!spend()) return out_of_fuel();
        emit(make_apply_label(st, rule, fired_ids, fired_theta));
        std::vector<ConstraintAtom> body = apply_in_state(st, rule, fired_ids, fired_theta);
        // body executes immediately; the active constraint resumes afterwards
        // at the same occurrence (or is gone if it was a removed head)
        stack.push_back(GoalFrame{std::move(body), 0});
    }

    st.status = ExecutionState::Status::final_state;
    result.outcome = Outcome::final_state;
    return result;
}

} // namespace chr
