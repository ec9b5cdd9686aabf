/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/printer.hpp"

#include <algorithm>
#include <sstream>

namespace chr {

namespace {

int op_level(const std::string& name, std::size_t arity) {
    if (arity != 2) return 0;
    if (name == "+" || name == "-") return 500;
    if (name == "*" || name == "mod") return 400;
    if (name == "=" || name == "==" || name == "\\==" || name == "<" || name == "=<" ||
        name == ">" || name == ">=" || name == "=:=" || name == "=\\=" || name == "is")
        return 700;
    return 0;
}

bool word_op(const std::string& name) { return name == "mod" || name == "is"; }

} // namespace

std::string Namer::name_of(const Term& v, const std::vector<std::string>* rule_names) {
    std::pair<bool, VarId> key{v.var_is_rule_scoped(), v.var_id()};
    for (auto& [k, n] : assigned_)
        if (k == key) return n;
    std::string name;
    if (runtime_ != nullptr) {
        if (v.var_is_rule_scoped())
            name = rule_names != nullptr ? (*rule_names)[static_cast<std::size_t>(v.var_id())]
                                         : "_R" + std::to_string(v.var_id());
        else
            name = runtime_->name(v.var_id());
    } else {
        name = "_G" + std::to_string(next_g_++);
    }
    assigned_.emplace_back(key, name);
    return name;
}

namespace {

// max_level: highest operator level printable without parentheses
void print_rec(std::ostringstream& out, const Term& t0, const Bindings* b, Namer& namer,
               const std::vector<std::string>* rule_names, int max_level,
               std::vector<VarId>& path) {
    Term t = b != nullptr ? b->resolve(t0) : t0;
    switch (t.kind()) {
        case Term::Kind::var:
            out << namer.name_of(t, rule_names);
            return;
        case Term::Kind::integer:
            out << t.int_value();
            return;
        case Term::Kind::atom:
            out << t.name();
            return;
        case Term::Kind::compound: break;
    }
    // cycle cut: a bound variable leading back into itself prints as the var
    VarId via = -1;
    if (t0.is_var() && !t0.var_is_rule_scoped() && b != nullptr && b->is_bound(t0.var_id())) {
        if (std::find(path.begin(), path.end(), t0.var_id()) != path.end()) {
            out << namer.name_of(t0, rule_names);
            return;
        }
        via = t0.var_id();
        path.push_back(via);
    }
    int level = op_level(t.name(), t.arity());
    if (level > 0) {
        bool parens = level > max_level;
        if (parens) out << "(";
        // left-assoc for arithmetic; comparisons are non-associative
        int left_max = level == 700 ? 699 : level;
        int right_max = level - 1;
        print_rec(out, t.args()[0], b, namer, rule_names, left_max, path);
        if (word_op(t.name()))
            out << " " << t.name() << " ";
        else
            out << t.name();
        print_rec(out, t.args()[1], b, namer, rule_names, right_max, path);
        if (parens) out << ")";
    } else if (t.name() == "-" && t.arity() == 1) {
        out << "-";
        print_rec(out, t.args()[0], b, namer, rule_names, 0, path);
    } else {
        out << t.name() << "(";
        for (std::size_t i = 0; i < t.arity(); ++i) {
            if (i > 0) out << ",";
            print_rec(out, t.args()[i], b, namer, rule_names, 700, path);
        }
        out << ")";
    }
    if (via >= 0) path.pop_back();
}

} // namespace

std::string print_term(const Term& t, const Bindings* b, Namer& namer,
                       const std::vector<std::string>* rule_names) {
    std::ostringstream out;
    std::vector<VarId> path;
    print_rec(out, t, b, namer, rule_names, 700, path);
    return out.str();
}

std::string print_atom(const ConstraintAtom& a, const Bindings* b, Namer& namer,
                       const std::vector<std::string>* rule_names) {
    if (a.args.empty()) return a.symbol;
    int level = op_level(a.symbol, a.args.size());
    std::ostringstream out;
    std::vector<VarId> path;
    if (level > 0) {
        print_rec(out, a.args[0], b, namer, rule_names, level == 700 ? 699 : level, path);
        if (word_op(a.symbol))
            out << " " << a.symbol << " ";
        else
            out << a.symbol;
        print_rec(out, a.args[1], b, namer, rule_names, level - 1, path);
        return out.str();
    }
    out << a.symbol << "(";
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i > 0) out << ",";
        print_rec(out, a.args[i], b, namer, rule_names, 700, path);
    }
    out << ")";
    return out.str();
}

std::string print_canonical(const Term& t, const Bindings* b) {
    Namer n = Namer::canonical();
    return print_term(t, b, n);
}

std::string print_canonical(const ConstraintAtom& a, const Bindings* b) {
    Namer n = Namer::canonical();
    return print_atom(a, b, n);
}

std::vector<ConstraintId> store_print_order(const Store& s, const Bindings& b) {
    std::vector<ConstraintId> ids;
    ids.reserve(s.size());
    for (const auto& [id, _] : s.live()) ids.push_back(id);
    std::stable_sort(ids.begin(), ids.end(), [&](ConstraintId x, ConstraintId y) {
        const ConstraintAtom& ax = s.get(x).atom;
        const ConstraintAtom& ay = s.get(y).atom;
        if (ax.symbol != ay.symbol) return ax.symbol < ay.symbol;
        if (ax.args.size() != ay.args.size()) return ax.args.size() < ay.args.size();
        for (std::size_t i = 0; i < ax.args.size(); ++i) {
            int c = Term::compare(b.expand(ax.args[i]), b.expand(ay.args[i]));
            if (c != 0) return c < 0;
        }
        return x < y;
    });
    return ids;
}

std::string print_store(const Store& s, const Bindings& b, bool with_ids) {
    std::vector<ConstraintId> ids = store_print_order(s, b);
    Namer namer = Namer::canonical();
    std::ostringstream out;
    bool first = true;
    for (ConstraintId id : ids) {
        if (!first) out << ", ";
        first = false;
        out << print_atom(s.get(id).atom, &b, namer);
        if (with_ids) out << "#" << id;
    }
    return out.str();
}

namespace {

std::string print_atom_list(const std::vector<ConstraintAtom>& atoms, Namer& namer,
                            const std::vector<std::string>* rule_names) {
    std::ostringstream out;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (i > 0) out << ", ";
        out << print_atom(atoms[i], nullptr, namer, rule_names);
    }
    return out.str();
}

} // namespace

std::string print_rule(const Rule& r) {
    // rule variables keep their source names; a dummy VarTable backs the namer
    static const VarTable empty_table;
    Namer namer = Namer::preserving(empty_table);
    std::ostringstream out;
    out << r.name << " @ ";
    if (r.priority.has_value())
        out << print_term(*r.priority, nullptr, namer, &r.var_names) << " :: ";
    if (!r.kept.empty()) {
        out << print_atom_list(r.kept, namer, &r.var_names);
        if (!r.removed.empty())
            out << " \\ ";
        else
            out << " ==> ";
    }
    if (!r.removed.empty()) out << print_atom_list(r.removed, namer, &r.var_names) << " <=> ";
    out << print_atom_list(r.guard, namer, &r.var_names) << " | ";
    out << print_atom_list(r.body, namer, &r.var_names) << ".";
    return out.str();
}

std::string print_program(const Program& p) {
    std::ostringstream out;
    if (!p.declared().empty()) {
        out << "constraints ";
        bool first = true;
        for (const SymbolArity& d : p.declared()) {
            if (!first) out << ", ";
            first = false;
            out << d.symbol << "/" << d.arity;
        }
        out << ".\n";
    }
    for (const Rule& r : p.rules()) out << print_rule(r) << "\n";
    return out.str();
}

} // namespace chr
