/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/store.hpp"

#include <cassert>
#include <functional>

namespace chr {

void PropagationHistory::prune_id(ConstraintId id) {
    for (auto it = tuples_.begin(); it != tuples_.end();) {
        const auto& ids = it->second;
        bool hit = false;
        for (ConstraintId i : ids)
            if (i == id) {
                hit = true;
                break;
            }
        it = hit ? tuples_.erase(it) : ++it;
    }
}

std::uint64_t hash_ground_term(const Term& t0, const Bindings& b) {
    Term t = b.resolve(t0);
    auto mix = [](std::uint64_t h, std::uint64_t v) {
        return (h ^ v) * 0x100000001b3ULL;
    };
    std::uint64_t h = 0xcbf29ce484222325ULL;
    switch (t.kind()) {
        case Term::Kind::integer:
            return mix(h, static_cast<std::uint64_t>(t.int_value()) * 2 + 1);
        case Term::Kind::atom:
            return mix(h, std::hash<std::string>{}(t.name()));
        case Term::Kind::compound: {
            h = mix(h, std::hash<std::string>{}(t.name()));
            h = mix(h, t.arity());
            for (const Term& a : t.args()) h = mix(h, hash_ground_term(a, b));
            return h;
        }
        case Term::Kind::var:
            return mix(h, 7); // callers only hash ground terms
    }
    return h;
}

Store::Footprint Store::footprint_of(const ConstraintAtom& atom, const Bindings& b) const {
    Footprint fp;
    fp.arg_hash.reserve(atom.args.size());
    for (const Term& arg : atom.args) {
        if (b.is_ground(arg))
            fp.arg_hash.push_back(hash_ground_term(arg, b));
        else
            fp.arg_hash.push_back(std::nullopt);
        b.collect_vars(arg, fp.vars);
    }
    return fp;
}

void Store::index_in(ConstraintId id, const Footprint& fp, const SymbolArity& key) {
    by_symbol_[key].insert(id);
    for (std::uint32_t pos = 0; pos < fp.arg_hash.size(); ++pos) {
        ArgBuckets& buckets = by_arg_[{key, pos}];
        if (fp.arg_hash[pos].has_value())
            buckets.ground[*fp.arg_hash[pos]].insert(id);
        else
            buckets.nonground.insert(id);
    }
    for (VarId v : fp.vars) by_var_[v].insert(id);
}

void Store::index_out(ConstraintId id, const Footprint& fp, const SymbolArity& key) {
    auto drop = [id](auto& map, const auto& k) {
        auto it = map.find(k);
        if (it == map.end()) return;
        it->second.erase(id);
        if (it->second.empty()) map.erase(it);
    };
    drop(by_symbol_, key);
    for (std::uint32_t pos = 0; pos < fp.arg_hash.size(); ++pos) {
        auto it = by_arg_.find({key, pos});
        if (it == by_arg_.end()) continue;
        if (fp.arg_hash[pos].has_value()) {
            auto git = it->second.ground.find(*fp.arg_hash[pos]);
            if (git != it->second.ground.end()) {
                git->second.erase(id);
                if (git->second.empty()) it->second.ground.erase(git);
            }
        } else {
            it->second.nonground.erase(id);
        }
        if (it->second.ground.empty() && it->second.nonground.empty()) by_arg_.erase(it);
    }
    for (VarId v : fp.vars) drop(by_var_, v);
}

ConstraintId Store::introduce(ConstraintAtom atom, const Bindings& b) {
    assert(atom.kind == ConstraintAtom::Kind::chr);
    ConstraintId id = next_id_++;
    Footprint fp = footprint_of(atom, b);
    SymbolArity key = atom.key();
    live_.emplace(id, IdentifiedConstraint{std::move(atom), id});
    index_in(id, fp, key);
    footprints_.emplace(id, std::move(fp));
    return id;
}

void Store::remove(ConstraintId id, PropagationHistory& history) {
    auto it = live_.find(id);
    assert(it != live_.end() && "removing a non-live constraint id");
    index_out(id, footprints_.at(id), it->second.atom.key());
    footprints_.erase(id);
    live_.erase(it);
    history.prune_id(id);
}

void Store::reindex(ConstraintId id, const Bindings& b) {
    auto it = live_.find(id);
    if (it == live_.end()) return;
    SymbolArity key = it->second.atom.key();
    index_out(id, footprints_.at(id), key);
    Footprint fp = footprint_of(it->second.atom, b);
    index_in(id, fp, key);
    footprints_[id] = std::move(fp);
}

void Store::on_bound(VarId v, const Bindings& b) {
    auto it = by_var_.find(v);
    if (it == by_var_.end()) return;
    std::vector<ConstraintId> ids(it->second.begin(), it->second.end());
    for (ConstraintId id : ids) reindex(id, b);
}

std::vector<ConstraintId> Store::attached(VarId v) const {
    auto it = by_var_.find(v);
    if (it == by_var_.end()) return {};
    return {it->second.begin(), it->second.end()};
}

std::vector<ConstraintId> Store::candidates(const ConstraintAtom& pattern,
                                            const MatchSubst& theta, const Bindings& b) const {
    SymbolArity key = pattern.key();
    auto sym_it = by_symbol_.find(key);
    if (sym_it == by_symbol_.end()) return {};

    // effective pattern argument: rule variables substituted through theta,
    // then dereferenced; nullopt when an unmatched rule variable remains
    std::function<std::optional<Term>(const Term&)> subst_pattern =
        [&](const Term& arg) -> std::optional<Term> {
        if (arg.is_var()) {
            if (!arg.var_is_rule_scoped()) return arg;
            const Term* bound = theta.lookup(arg.var_id());
            if (bound == nullptr) return std::nullopt;
            return *bound;
        }
        if (!arg.is_compound()) return arg;
        std::vector<Term> args;
        args.reserve(arg.arity());
        for (const Term& a : arg.args()) {
            std::optional<Term> s = subst_pattern(a);
            if (!s) return std::nullopt;
            args.push_back(std::move(*s));
        }
        return Term::compound(arg.name(), std::move(args));
    };
    auto effective = [&](const Term& arg) -> std::optional<Term> {
        std::optional<Term> s = subst_pattern(arg);
        if (!s) return std::nullopt;
        return b.resolve(*s);
    };

    // first choice: a ground argument position, probed in the value index
    for (std::uint32_t pos = 0; pos < pattern.args.size(); ++pos) {
        std::optional<Term> eff = effective(pattern.args[pos]);
        if (!eff || !b.is_ground(*eff)) continue;
        auto arg_it = by_arg_.find({key, pos});
        if (arg_it == by_arg_.end()) return {};
        std::set<ConstraintId> out = arg_it->second.nonground;
        auto git = arg_it->second.ground.find(hash_ground_term(*eff, b));
        if (git != arg_it->second.ground.end()) out.insert(git->second.begin(), git->second.end());
        return {out.begin(), out.end()};
    }
    // second choice: an unbound variable position, via attachments
    for (std::uint32_t pos = 0; pos < pattern.args.size(); ++pos) {
        std::optional<Term> eff = effective(pattern.args[pos]);
        if (!eff || !eff->is_var() || eff->var_is_rule_scoped()) continue;
        auto var_it = by_var_.find(eff->var_id());
        if (var_it == by_var_.end()) return {};
        std::vector<ConstraintId> out;
        for (ConstraintId id : var_it->second)
            if (sym_it->second.count(id)) out.push_back(id);
        return out;
    }
    return {sym_it->second.begin(), sym_it->second.end()};
}

} // namespace chr
