/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/priority.hpp"

#include <algorithm>
#include <optional>
#include <set>

#include "chr/herbrand.hpp"
#include "chr/printer.hpp"

namespace chr {

namespace {

constexpr std::int64_t kDefaultPriority = 1;

struct Instance {
    std::int64_t priority = kDefaultPriority;
    std::size_t rule_index = 0;
    std::size_t seq = 0; // discovery order within the round
    std::vector<ConstraintId> ids;
    MatchSubst theta;
};

// all currently fireable instances with evaluated priorities; nullopt when a
// dynamic priority is nonground or non-integer (reported via error_out)
std::optional<std::vector<Instance>> collect_instances(const Program& program,
                                                       const ExecutionState& st,
                                                       std::string* error_out) {
    std::vector<Instance> instances;
    std::size_t seq = 0;
    for (std::size_t r = 0; r < program.size(); ++r) {
        const Rule& rule = program.rule(r);
        bool bad_priority = false;
        for_each_instance(program, r, st, std::nullopt,
                          [&](const std::vector<ConstraintId>& ids, const MatchSubst& theta) {
                              Instance inst;
                              inst.rule_index = r;
                              inst.seq = seq++;
                              inst.ids = ids;
                              inst.theta = theta;
                              if (rule.priority.has_value()) {
                                  ArithResult p = eval_arith(*rule.priority, theta, st.bindings);
                                  if (p.status != ArithStatus::ok) {
                                      bad_priority = true;
                                      return false;
                                  }
                                  inst.priority = p.value;
                              }
                              instances.push_back(std::move(inst));
                              return true;
                          });
        if (bad_priority) {
            if (error_out != nullptr)
                *error_out = "priority of rule '" + rule.name +
                             "' is not a ground integer at firing time";
            return std::nullopt;
        }
    }
    return instances;
}

const Instance* best_instance(const std::vector<Instance>& instances) {
    const Instance* best = nullptr;
    for (const Instance& inst : instances) {
        if (best == nullptr || inst.priority < best->priority ||
            (inst.priority == best->priority &&
             (inst.rule_index < best->rule_index ||
              (inst.rule_index == best->rule_index && inst.seq < best->seq))))
            best = &inst;
    }
    return best;
}

// distinct static priority bands a symbol occurs at; dynamic bands are traced
// with the rule's default band marker
void emit_schedule_events(const Program& program, const ExecutionState& st, ConstraintId id,
                          std::vector<TransitionLabel>& trace) {
    const SymbolArity key = st.store.get(id).atom.key();
    std::set<std::pair<std::int64_t, bool>> bands; // (priority, dynamic?)
    for (const Occurrence& occ : program.occurrences(key)) {
        const Rule& rule = program.rule(occ.rule_index);
        if (!rule.priority.has_value()) {
            bands.insert({kDefaultPriority, false});
        } else if (rule.priority->is_int()) {
            bands.insert({rule.priority->int_value(), false});
        } else {
            bands.insert({0, true});
        }
    }
    for (auto [p, dynamic] : bands) {
        TransitionLabel lab;
        lab.kind = StepKind::schedule;
        lab.id = id;
        lab.priority = p;
        Namer namer = Namer::preserving(st.vars);
        lab.detail = print_atom(st.store.get(id).atom, &st.bindings, namer) + "#" +
                     std::to_string(id) + (dynamic ? " dyn" : "");
        trace.push_back(std::move(lab));
    }
}

} // namespace

RunResult run_priority(const Program& program, ExecutionState initial, std::size_t fuel) {
    RunResult result;
    result.state = std::move(initial);
    ExecutionState& st = result.state;

    auto spend = [&]() -> bool {
        if (fuel == 0) return false;
        --fuel;
        return true;
    };

    while (true) {
        // batch mode: drain the goal before any rule may fire
        while (!st.goal.empty()) {
            if (!spend()) {
                result.outcome = Outcome::out_of_fuel;
                return result;
            }
            ConstraintAtom atom = std::move(st.goal.front());
            st.goal.erase(st.goal.begin());
            if (atom.is_builtin()) {
                result.trace.push_back(make_solve_label(st, atom));
                std::vector<ConstraintId> touched;
                if (!solve_in_state(st, atom, &touched)) {
                    result.outcome = Outcome::failed;
                    return result;
                }
                std::sort(touched.begin(), touched.end());
                touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
                for (ConstraintId id : touched) {
                    if (!st.store.is_live(id)) continue;
                    TransitionLabel lab;
                    lab.kind = StepKind::reactivate;
                    lab.id = id;
                    Namer namer = Namer::preserving(st.vars);
                    lab.detail = print_atom(st.store.get(id).atom, &st.bindings, namer) + "#" +
                                 std::to_string(id);
                    result.trace.push_back(std::move(lab));
                    emit_schedule_events(program, st, id, result.trace);
                }
            } else {
                result.trace.push_back(make_introduce_label(st, atom));
                ConstraintId id = introduce_in_state(st, atom);
                emit_schedule_events(program, st, id, result.trace);
            }
        }

        std::string error;
        auto instances = collect_instances(program, st, &error);
        if (!instances.has_value()) {
            result.outcome = Outcome::error;
            result.error = std::move(error);
            return result;
        }
        const Instance* inst = best_instance(*instances);
        if (inst == nullptr) {
            st.status = ExecutionState::Status::final_state;
            result.outcome = Outcome::final_state;
            return result;
        }
        if (!spend()) {
            result.outcome = Outcome::out_of_fuel;
            return result;
        }
        const Rule& rule = program.rule(inst->rule_index);
        result.trace.push_back(make_apply_label(st, rule, inst->ids, inst->theta));
        std::vector<ConstraintAtom> body = apply_in_state(st, rule, inst->ids, inst->theta);
        st.goal.insert(st.goal.end(), body.begin(), body.end());
    }
}

bool verify_priority_trace(const Program& program, ExecutionState initial,
                           const std::vector<TransitionLabel>& trace) {
    ExecutionState st = std::move(initial);
    for (const TransitionLabel& lab : trace) {
        switch (lab.kind) {
            case StepKind::reactivate:
            case StepKind::schedule:
            case StepKind::activate:
            case StepKind::pop:
                continue;
            case StepKind::solve: {
                bool stepped = false;
                for (std::size_t i = 0; i < st.goal.size(); ++i) {
                    if (!st.goal[i].is_builtin()) continue;
                    if (make_solve_label(st, st.goal[i]).detail != lab.detail) continue;
                    ConstraintAtom atom = st.goal[i];
                    st.goal.erase(st.goal.begin() + static_cast<std::ptrdiff_t>(i));
                    solve_in_state(st, atom);
                    stepped = true;
                    break;
                }
                if (!stepped) return false;
                break;
            }
            case StepKind::introduce: {
                bool stepped = false;
                for (std::size_t i = 0; i < st.goal.size(); ++i) {
                    if (st.goal[i].is_builtin()) continue;
                    if (make_introduce_label(st, st.goal[i]).detail != lab.detail) continue;
                    ConstraintAtom atom = st.goal[i];
                    st.goal.erase(st.goal.begin() + static_cast<std::ptrdiff_t>(i));
                    introduce_in_state(st, atom);
                    stepped = true;
                    break;
                }
                if (!stepped) return false;
                break;
            }
            case StepKind::apply: {
                // batch mode: nothing may be pending in the goal
                if (!st.goal.empty()) return false;
                auto instances = collect_instances(program, st, nullptr);
                if (!instances.has_value()) return false;
                const Instance* fired = nullptr;
                std::int64_t min_priority = 0;
                bool have_min = false;
                for (const Instance& inst : *instances) {
                    if (!have_min || inst.priority < min_priority) {
                        min_priority = inst.priority;
                        have_min = true;
                    }
                    if (program.rule(inst.rule_index).name == lab.rule_name &&
                        inst.ids == lab.ids)
                        fired = &inst;
                }
                if (fired == nullptr) return false;
                // no strictly higher-priority instance was applicable
                if (min_priority < fired->priority) return false;
                const Rule& rule = program.rule(fired->rule_index);
                std::vector<ConstraintAtom> body = apply_in_state(st, rule, fired->ids,
                                                                  fired->theta);
                st.goal.insert(st.goal.end(), body.begin(), body.end());
                break;
            }
        }
        if (st.failed()) break;
    }
    return true;
}

} // namespace chr
