/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/omega_t.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <random>
#include <sstream>

#include "chr/herbrand.hpp"
#include "chr/printer.hpp"

namespace chr {

const char* step_kind_name(StepKind k) {
    switch (k) {
        case StepKind::solve: return "solve";
        case StepKind::introduce: return "introduce";
        case StepKind::apply: return "apply";
        case StepKind::activate: return "activate";
        case StepKind::reactivate: return "reactivate";
        case StepKind::pop: return "pop";
        case StepKind::schedule: return "schedule";
    }
    return "?";
}

std::string TransitionLabel::render(std::size_t step_no) const {
    std::ostringstream out;
    out << step_no << " " << step_kind_name(kind);
    if (kind == StepKind::schedule) out << "(" << priority << ")";
    if (!detail.empty()) out << " " << detail;
    return out.str();
}

std::string render_trace(const std::vector<TransitionLabel>& trace) {
    std::ostringstream out;
    for (std::size_t i = 0; i < trace.size(); ++i) out << trace[i].render(i + 1) << "\n";
    return out.str();
}

TransitionLabel make_solve_label(const ExecutionState& st, const ConstraintAtom& atom) {
    TransitionLabel lab;
    lab.kind = StepKind::solve;
    Namer namer = Namer::preserving(st.vars);
    lab.detail = print_atom(atom, &st.bindings, namer);
    return lab;
}

TransitionLabel make_introduce_label(const ExecutionState& st, const ConstraintAtom& atom) {
    TransitionLabel lab;
    lab.kind = StepKind::introduce;
    lab.id = st.store.next_id(); // id the introduction will assign
    Namer namer = Namer::preserving(st.vars);
    lab.detail = print_atom(atom, &st.bindings, namer) + "#" + std::to_string(lab.id);
    return lab;
}

TransitionLabel make_apply_label(const ExecutionState& st, const Rule& rule,
                                 const std::vector<ConstraintId>& ids, const MatchSubst& theta) {
    TransitionLabel lab;
    lab.kind = StepKind::apply;
    lab.rule_name = rule.name;
    lab.ids = ids;
    std::ostringstream out;
    out << rule.name << " [";
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out << ",";
        out << ids[i];
    }
    out << "] {";
    Namer namer = Namer::preserving(st.vars);
    std::vector<std::pair<VarId, Term>> entries = theta.entries();
    std::sort(entries.begin(), entries.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    bool first = true;
    for (const auto& [v, t] : entries) {
        if (!first) out << ",";
        first = false;
        out << rule.var_names[static_cast<std::size_t>(v)] << "->"
            << print_term(t, &st.bindings, namer);
    }
    out << "}";
    lab.detail = out.str();
    return lab;
}

std::vector<std::pair<TransitionLabel, ExecutionState>> successors(const Program& program,
                                                                   const ExecutionState& st) {
    std::vector<std::pair<TransitionLabel, ExecutionState>> out;
    if (st.status != ExecutionState::Status::running) return out;

    // Solve / Introduce, goal left to right
    for (std::size_t i = 0; i < st.goal.size(); ++i) {
        const ConstraintAtom& atom = st.goal[i];
        ExecutionState next = st;
        next.goal.erase(next.goal.begin() + static_cast<std::ptrdiff_t>(i));
        TransitionLabel lab;
        if (atom.is_builtin()) {
            lab = make_solve_label(st, atom);
            solve_in_state(next, atom);
        } else {
            lab = make_introduce_label(st, atom);
            introduce_in_state(next, atom);
        }
        out.emplace_back(std::move(lab), std::move(next));
    }

    // Apply, rules in textual order, partners in index order
    for (std::size_t r = 0; r < program.size(); ++r) {
        const Rule& rule = program.rule(r);
        for_each_instance(program, r, st, std::nullopt,
                          [&](const std::vector<ConstraintId>& ids, const MatchSubst& theta) {
                              TransitionLabel lab = make_apply_label(st, rule, ids, theta);
                              ExecutionState next = st;
                              std::vector<ConstraintAtom> body =
                                  apply_in_state(next, rule, ids, theta);
                              next.goal.insert(next.goal.begin(), body.begin(), body.end());
                              out.emplace_back(std::move(lab), std::move(next));
                              return true;
                          });
    }
    return out;
}

namespace {

void settle(ExecutionState& st) {
    if (st.status == ExecutionState::Status::running)
        st.status = ExecutionState::Status::final_state;
}

} // namespace

RunResult run(const Program& program, ExecutionState initial, Strategy strategy,
              std::size_t fuel) {
    RunResult result;
    result.state = std::move(initial);
    std::mt19937_64 rng(strategy.seed);
    while (true) {
        if (result.state.failed()) {
            result.outcome = Outcome::failed;
            return result;
        }
        auto succ = successors(program, result.state);
        if (succ.empty()) {
            settle(result.state);
            result.outcome = Outcome::final_state;
            return result;
        }
        if (fuel == 0) {
            result.outcome = Outcome::out_of_fuel;
            return result;
        }
        --fuel;
        std::size_t pick = 0;
        if (strategy.policy == Strategy::Policy::random) {
            std::uniform_int_distribution<std::size_t> dist(0, succ.size() - 1);
            pick = dist(rng);
        }
        result.trace.push_back(std::move(succ[pick].first));
        result.state = std::move(succ[pick].second);
    }
}

Explorer::Explorer(const Program& program, ExecutionState initial) : program_(program) {
    seen_.insert(state_key(initial));
    queue_.push_back({std::move(initial), {}});
}

std::optional<std::string> Explorer::step() {
    if (queue_.empty()) return std::nullopt;
    ++explored_;
    Node node = std::move(queue_.front());
    queue_.pop_front();

    if (node.state.failed()) {
        if (!forms_.count("FAIL")) {
            forms_.emplace("FAIL", NormalForm{"FAIL", std::move(node.state), std::move(node.trace)});
            return std::string("FAIL");
        }
        return std::string();
    }
    auto succ = successors(program_, node.state);
    if (succ.empty()) {
        settle(node.state);
        std::string key = nf_key(node.state);
        if (!forms_.count(key)) {
            forms_.emplace(key, NormalForm{key, std::move(node.state), std::move(node.trace)});
            return key;
        }
        return std::string();
    }
    for (auto& [lab, next] : succ) {
        std::string key = next.failed() ? "FAIL" : state_key(next);
        if (seen_.count(key)) continue;
        seen_.insert(key);
        std::vector<TransitionLabel> trace = node.trace;
        trace.push_back(std::move(lab));
        queue_.push_back({std::move(next), std::move(trace)});
    }
    return std::string();
}

ExploreResult explore_all(const Program& program, const ExecutionState& initial,
                          std::size_t state_fuel) {
    ExploreResult result;
    Explorer explorer(program, initial);
    std::size_t budget = state_fuel;
    while (!explorer.exhausted()) {
        if (budget == 0) {
            result.truncated = true;
            break;
        }
        --budget;
        explorer.step();
    }
    for (const auto& [key, nf] : explorer.normal_forms()) result.normal_forms.push_back(nf);
    return result;
}

bool validate_trace(const Program& program, ExecutionState initial,
                    const std::vector<TransitionLabel>& trace, ExecutionState* final_out) {
    ExecutionState st = std::move(initial);
    for (const TransitionLabel& lab : trace) {
        if (lab.kind == StepKind::activate || lab.kind == StepKind::reactivate ||
            lab.kind == StepKind::pop || lab.kind == StepKind::schedule)
            continue;
        if (st.status != ExecutionState::Status::running) return false;
        switch (lab.kind) {
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
                const Rule* rule = nullptr;
                for (const Rule& r : program.rules())
                    if (r.name == lab.rule_name) {
                        rule = &r;
                        break;
                    }
                if (rule == nullptr || lab.ids.size() != rule->head_count()) return false;
                MatchSubst theta;
                for (std::size_t pos = 0; pos < rule->head_count(); ++pos) {
                    ConstraintId id = lab.ids[pos];
                    if (!st.store.is_live(id)) return false;
                    if (std::count(lab.ids.begin(), lab.ids.end(), id) != 1) return false;
                    if (!match_atom(rule->head(pos), st.store.get(id).atom, st.bindings, theta))
                        return false;
                }
                if (st.history.contains(rule->name, lab.ids)) return false;
                if (check_guard(rule->guard, theta, st.bindings) != GuardStatus::holds)
                    return false;
                std::vector<ConstraintAtom> body = apply_in_state(st, *rule, lab.ids, theta);
                st.goal.insert(st.goal.begin(), body.begin(), body.end());
                break;
            }
            default: return false;
        }
    }
    if (final_out != nullptr) {
        if (st.status == ExecutionState::Status::running && successors(program, st).empty())
            settle(st);
        *final_out = std::move(st);
    }
    return true;
}

} // namespace chr
