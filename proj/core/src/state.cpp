/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/state.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <sstream>

#include "chr/herbrand.hpp"
#include "chr/printer.hpp"

namespace chr {

ExecutionState make_initial_state(const std::vector<ConstraintAtom>& goal_atoms, VarTable vars,
                                  std::vector<VarId> query_vars, bool occurs_check) {
    ExecutionState st;
    st.goal = goal_atoms;
    st.bindings = Bindings(occurs_check);
    st.vars = std::move(vars);
    st.query_vars = std::move(query_vars);
    return st;
}

bool solve_in_state(ExecutionState& st, const ConstraintAtom& atom,
                    std::vector<ConstraintId>* reactivate) {
    assert(atom.is_builtin());
    auto fail = [&] {
        st.status = ExecutionState::Status::failed;
        return false;
    };
    auto tell_unify = [&](const Term& a, const Term& b) {
        std::size_t pos = st.bindings.trail_size();
        if (!st.bindings.unify(a, b)) return false;
        for (VarId v : st.bindings.bound_since(pos)) {
            if (reactivate != nullptr)
                for (ConstraintId id : st.store.attached(v)) reactivate->push_back(id);
            st.store.on_bound(v, st.bindings);
        }
        return true;
    };

    const std::string& s = atom.symbol;
    if (s == "true") return true;
    if (s == "fail") return fail();
    if (s == "=") return tell_unify(atom.args[0], atom.args[1]) ? true : fail();
    if (s == "==")
        return equal_under(st.bindings, atom.args[0], atom.args[1]) ? true : fail();
    if (s == "\\==")
        return !equal_under(st.bindings, atom.args[0], atom.args[1]) ? true : fail();
    if (s == "is") {
        ArithResult r = eval_arith(atom.args[1], st.bindings);
        if (r.status != ArithStatus::ok) return fail();
        return tell_unify(atom.args[0], Term::integer(r.value)) ? true : fail();
    }
    ArithResult a = eval_arith(atom.args[0], st.bindings);
    ArithResult b = eval_arith(atom.args[1], st.bindings);
    if (a.status != ArithStatus::ok || b.status != ArithStatus::ok) return fail();
    bool ok = false;
    if (s == "<") ok = a.value < b.value;
    else if (s == "=<") ok = a.value <= b.value;
    else if (s == ">") ok = a.value > b.value;
    else if (s == ">=") ok = a.value >= b.value;
    else if (s == "=:=") ok = a.value == b.value;
    else if (s == "=\\=") ok = a.value != b.value;
    return ok ? true : fail();
}

ConstraintId introduce_in_state(ExecutionState& st, const ConstraintAtom& atom) {
    ConstraintAtom c = atom;
    for (Term& arg : c.args) arg = normalize_arith(arg, st.bindings);
    return st.store.introduce(std::move(c), st.bindings);
}

std::vector<ConstraintAtom> apply_in_state(ExecutionState& st, const Rule& rule,
                                           const std::vector<ConstraintId>& ids,
                                           const MatchSubst& theta) {
    st.history.add(rule.name, ids);
    for (std::size_t pos = rule.kept.size(); pos < rule.head_count(); ++pos)
        st.store.remove(ids[pos], st.history);
    std::unordered_map<VarId, VarId> fresh_map;
    std::vector<ConstraintAtom> body;
    body.reserve(rule.body.size());
    for (const ConstraintAtom& a : rule.body)
        body.push_back(instantiate(a, theta, st.vars, fresh_map));
    return body;
}

// --------------------------------------------------------------------------
// Canonical state keys, invariant under renaming of internal variables and
// of constraint ids. Items whose shapes tie are permuted (bounded) and the
// lexicographically smallest full rendering wins.
// --------------------------------------------------------------------------

namespace {

struct KTok {
    enum class K : std::uint8_t { text, var, id } k;
    std::string text;  // text content
    VarId var = 0;     // internal variable
    ConstraintId id = 0;
};

using KStr = std::vector<KTok>;

struct KeyBuilder {
    const ExecutionState& st;
    std::map<VarId, std::string> external_names;

    explicit KeyBuilder(const ExecutionState& s) : st(s) {
        for (VarId v : s.query_vars) external_names[v] = s.vars.name(v);
    }

    void term_toks(const Term& t0, KStr& out, std::vector<VarId>& path) const {
        Term t = st.bindings.resolve(t0);
        if (t.is_var()) {
            if (t.var_is_rule_scoped()) {
                out.push_back({KTok::K::text, "?r" + std::to_string(t.var_id()), 0, 0});
                return;
            }
            auto it = external_names.find(t.var_id());
            if (it != external_names.end())
                out.push_back({KTok::K::text, it->second, 0, 0});
            else
                out.push_back({KTok::K::var, "", t.var_id(), 0});
            return;
        }
        if (t.is_int()) {
            out.push_back({KTok::K::text, std::to_string(t.int_value()), 0, 0});
            return;
        }
        if (t.is_atom()) {
            out.push_back({KTok::K::text, t.name(), 0, 0});
            return;
        }
        VarId via = -1;
        if (t0.is_var() && !t0.var_is_rule_scoped() && st.bindings.is_bound(t0.var_id())) {
            if (std::find(path.begin(), path.end(), t0.var_id()) != path.end()) {
                // cyclic binding: cut the loop by naming the variable itself
                auto it = external_names.find(t0.var_id());
                if (it != external_names.end())
                    out.push_back({KTok::K::text, it->second, 0, 0});
                else
                    out.push_back({KTok::K::var, "", t0.var_id(), 0});
                return;
            }
            via = t0.var_id();
            path.push_back(via);
        }
        out.push_back({KTok::K::text, t.name() + "(", 0, 0});
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i > 0) out.push_back({KTok::K::text, ",", 0, 0});
            term_toks(t.args()[i], out, path);
        }
        out.push_back({KTok::K::text, ")", 0, 0});
        if (via >= 0) path.pop_back();
    }

    KStr atom_toks(const ConstraintAtom& a) const {
        KStr out;
        out.push_back({KTok::K::text, a.symbol, 0, 0});
        if (!a.args.empty()) {
            out.push_back({KTok::K::text, "(", 0, 0});
            std::vector<VarId> path;
            for (std::size_t i = 0; i < a.args.size(); ++i) {
                if (i > 0) out.push_back({KTok::K::text, ",", 0, 0});
                term_toks(a.args[i], out, path);
            }
            out.push_back({KTok::K::text, ")", 0, 0});
        }
        return out;
    }
};

// item shape: renaming-invariant, with variables and ids numbered by first
// occurrence inside the item; keeps tie groups (items only a global renaming
// could reorder) small
std::string shape_of(const KStr& item) {
    std::string s;
    std::map<VarId, int> vars;
    std::map<ConstraintId, int> ids;
    for (const KTok& t : item) {
        switch (t.k) {
            case KTok::K::text: s += t.text; break;
            case KTok::K::var: {
                auto [it, _] = vars.emplace(t.var, static_cast<int>(vars.size()));
                s += "?" + std::to_string(it->second);
                break;
            }
            case KTok::K::id: {
                auto [it, _] = ids.emplace(t.id, static_cast<int>(ids.size()));
                s += "#" + std::to_string(it->second);
                break;
            }
        }
    }
    return s;
}

std::string raw_of(const KStr& item) {
    std::string s;
    for (const KTok& t : item) {
        switch (t.k) {
            case KTok::K::text: s += t.text; break;
            case KTok::K::var: s += "?v" + std::to_string(t.var); break;
            case KTok::K::id: s += "#i" + std::to_string(t.id); break;
        }
    }
    return s;
}

struct Section {
    std::string label;
    std::vector<KStr> items;
    bool sortable = false;
};

// equivalence decisions (nf_key) minimize exactly up to this bound; the
// exploration dedup key uses a small bound, where losing minimality only
// means an equivalent state may be visited twice
constexpr std::size_t kNfMaxPermutations = 20160;
constexpr std::size_t kExploreMaxPermutations = 24;

std::string render_ordering(const std::vector<const Section*>& sections,
                            const std::vector<std::vector<std::size_t>>& orders) {
    std::string out;
    std::map<VarId, int> var_names;
    std::map<ConstraintId, int> id_names;
    for (std::size_t s = 0; s < sections.size(); ++s) {
        const Section& sec = *sections[s];
        out += sec.label;
        for (std::size_t j = 0; j < sec.items.size(); ++j) {
            const KStr& item = sec.items[orders[s][j]];
            if (j > 0) out += ", ";
            for (const KTok& t : item) {
                switch (t.k) {
                    case KTok::K::text: out += t.text; break;
                    case KTok::K::var: {
                        auto [it, fresh] =
                            var_names.emplace(t.var, static_cast<int>(var_names.size()));
                        out += "_G" + std::to_string(it->second);
                        (void)fresh;
                        break;
                    }
                    case KTok::K::id: {
                        auto [it, fresh] =
                            id_names.emplace(t.id, static_cast<int>(id_names.size() + 1));
                        out += "#" + std::to_string(it->second);
                        (void)fresh;
                        break;
                    }
                }
            }
        }
        out += ";";
    }
    return out;
}

std::string canonical_render(std::vector<Section>& sections, std::size_t max_permutations) {
    // base order: items sorted by (shape, raw); ties form permutation groups
    struct Group {
        std::size_t section;
        std::size_t begin, end; // item index range with equal shape
    };
    std::vector<Group> groups;
    std::vector<std::vector<std::string>> shapes(sections.size());
    for (std::size_t s = 0; s < sections.size(); ++s) {
        Section& sec = sections[s];
        if (!sec.sortable) continue;
        std::stable_sort(sec.items.begin(), sec.items.end(), [](const KStr& a, const KStr& b) {
            std::string sa = shape_of(a), sb = shape_of(b);
            if (sa != sb) return sa < sb;
            return raw_of(a) < raw_of(b);
        });
        shapes[s].reserve(sec.items.size());
        for (const KStr& it : sec.items) shapes[s].push_back(shape_of(it));
        std::size_t i = 0;
        while (i < sec.items.size()) {
            std::size_t j = i + 1;
            while (j < sec.items.size() && shapes[s][j] == shapes[s][i]) ++j;
            if (j - i > 1) groups.push_back({s, i, j});
            i = j;
        }
    }

    std::vector<const Section*> ptrs;
    ptrs.reserve(sections.size());
    for (const Section& s : sections) ptrs.push_back(&s);
    std::vector<std::vector<std::size_t>> orders(sections.size());
    for (std::size_t s = 0; s < sections.size(); ++s) {
        orders[s].resize(sections[s].items.size());
        std::iota(orders[s].begin(), orders[s].end(), 0);
    }

    // permutation budget
    std::size_t total = 1;
    for (const Group& g : groups) {
        std::size_t f = 1;
        for (std::size_t k = 2; k <= g.end - g.begin; ++k) {
            f *= k;
            if (f > max_permutations) break;
        }
        if (total > max_permutations / std::max<std::size_t>(f, 1)) {
            total = max_permutations + 1;
            break;
        }
        total *= f;
    }
    if (groups.empty() || total > max_permutations)
        return render_ordering(ptrs, orders);

    std::string best;
    bool have_best = false;
    // odometer over per-group permutations
    std::vector<std::vector<std::size_t>> perms(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g) {
        perms[g].resize(groups[g].end - groups[g].begin);
        std::iota(perms[g].begin(), perms[g].end(), groups[g].begin);
    }
    std::vector<bool> done(groups.size(), false);
    for (;;) {
        for (std::size_t g = 0; g < groups.size(); ++g)
            for (std::size_t k = 0; k < perms[g].size(); ++k)
                orders[groups[g].section][groups[g].begin + k] = perms[g][k];
        std::string r = render_ordering(ptrs, orders);
        if (!have_best || r < best) {
            best = std::move(r);
            have_best = true;
        }
        // advance odometer
        std::size_t g = 0;
        for (; g < groups.size(); ++g) {
            if (std::next_permutation(perms[g].begin(), perms[g].end())) break;
            // wrapped: reset and carry
        }
        if (g == groups.size()) break;
    }
    return best;
}

// builtin store restricted to externals, as key items (see query_binding_lines
// for the human-facing twin of this projection)
std::vector<KStr> binding_items(const KeyBuilder& kb, const std::vector<Section>& other_sections) {
    const ExecutionState& st = kb.st;
    // external equality classes keyed by resolved representative variable
    std::map<VarId, std::vector<std::string>> classes;
    std::vector<std::pair<std::string, KStr>> nonvar_items; // (sort key, toks)
    for (VarId v : st.query_vars) {
        Term r = st.bindings.resolve(Term::var(v));
        if (r.is_var()) {
            classes[r.var_id()].push_back(st.vars.name(v));
        } else {
            KStr item;
            item.push_back({KTok::K::text, st.vars.name(v) + "=", 0, 0});
            std::vector<VarId> path;
            kb.term_toks(Term::var(v), item, path);
            nonvar_items.emplace_back(st.vars.name(v), std::move(item));
        }
    }
    // occurrence counts of internal vars elsewhere decide whether a class
    // representative is itself visible
    std::map<VarId, int> occurs;
    for (const Section& sec : other_sections)
        for (const KStr& item : sec.items)
            for (const KTok& t : item)
                if (t.k == KTok::K::var) ++occurs[t.var];
    for (const auto& [_, item] : nonvar_items)
        for (const KTok& t : item)
            if (t.k == KTok::K::var) ++occurs[t.var];

    std::vector<std::pair<std::string, KStr>> items = std::move(nonvar_items);
    for (auto& [rep, members] : classes) {
        std::sort(members.begin(), members.end());
        bool rep_external = kb.external_names.count(rep) > 0;
        bool rep_visible = !rep_external && occurs.count(rep) > 0;
        if (members.size() == 1 && !rep_visible) {
            // lone external equal to itself or to an invisible internal: free
            continue;
        }
        KStr item;
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i > 0) item.push_back({KTok::K::text, "=", 0, 0});
            item.push_back({KTok::K::text, members[i], 0, 0});
        }
        if (rep_visible) {
            item.push_back({KTok::K::text, "=", 0, 0});
            item.push_back({KTok::K::var, "", rep, 0});
        }
        items.emplace_back(members[0], std::move(item));
    }
    std::sort(items.begin(), items.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<KStr> out;
    out.reserve(items.size());
    for (auto& [_, item] : items) out.push_back(std::move(item));
    return out;
}

std::string build_key(const ExecutionState& st, bool exploration) {
    KeyBuilder kb(st);
    std::vector<Section> sections;

    Section store_sec{"S:", {}, true};
    for (const auto& [id, ic] : st.store.live()) {
        KStr item = kb.atom_toks(ic.atom);
        if (exploration) item.push_back({KTok::K::id, "", 0, id});
        store_sec.items.push_back(std::move(item));
    }
    sections.push_back(std::move(store_sec));

    if (exploration) {
        Section goal_sec{"G:", {}, true};
        for (const ConstraintAtom& a : st.goal) goal_sec.items.push_back(kb.atom_toks(a));
        sections.push_back(std::move(goal_sec));

        Section hist_sec{"T:", {}, true};
        for (const auto& [rule, ids] : st.history.tuples()) {
            KStr item;
            item.push_back({KTok::K::text, rule + "[", 0, 0});
            for (std::size_t i = 0; i < ids.size(); ++i) {
                if (i > 0) item.push_back({KTok::K::text, ",", 0, 0});
                item.push_back({KTok::K::id, "", 0, ids[i]});
            }
            item.push_back({KTok::K::text, "]", 0, 0});
            hist_sec.items.push_back(std::move(item));
        }
        sections.push_back(std::move(hist_sec));
    }

    Section bind_sec{"B:", binding_items(kb, sections), false};
    sections.push_back(std::move(bind_sec));
    return canonical_render(sections,
                            exploration ? kExploreMaxPermutations : kNfMaxPermutations);
}

} // namespace

std::string state_key(const ExecutionState& st) {
    if (st.failed()) return "FAIL";
    return build_key(st, true);
}

std::string nf_key(const ExecutionState& st) {
    if (st.failed()) return "FAIL";
    return build_key(st, false);
}

std::vector<std::string> query_binding_lines(const ExecutionState& st) {
    std::vector<std::string> lines;
    Namer namer = Namer::preserving(st.vars);
    std::map<VarId, std::vector<VarId>> classes;
    for (VarId v : st.query_vars) {
        Term r = st.bindings.resolve(Term::var(v));
        if (r.is_var()) {
            classes[r.var_id()].push_back(v);
        } else {
            lines.push_back(st.vars.name(v) + " = " +
                            print_term(Term::var(v), &st.bindings, namer));
        }
    }
    for (auto& [rep, members] : classes) {
        std::vector<std::string> names;
        names.reserve(members.size());
        for (VarId v : members) names.push_back(st.vars.name(v));
        std::sort(names.begin(), names.end());
        for (std::size_t i = 1; i < names.size(); ++i)
            lines.push_back(names[i] + " = " + names[0]);
    }
    std::sort(lines.begin(), lines.end());
    return lines;
}

} // namespace chr
