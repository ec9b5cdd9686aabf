/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#include "chr/program.hpp"

namespace chr {

Program Program::build(std::vector<Rule> rules, std::set<SymbolArity> declared) {
    Program p;
    p.rules_ = std::move(rules);
    p.declared_ = std::move(declared);
    for (std::size_t r = 0; r < p.rules_.size(); ++r) {
        Rule& rule = p.rules_[r];
        rule.index = r;
        if (rule.priority.has_value()) p.has_priorities_ = true;
        for (std::size_t pos = 0; pos < rule.head_count(); ++pos) {
            const ConstraintAtom& h = rule.head(pos);
            p.declared_.insert(h.key());
            p.occurrences_[h.key()].push_back({r, pos, rule.head_is_kept(pos)});
        }
    }
    return p;
}

const std::vector<Occurrence>& Program::occurrences(const SymbolArity& key) const {
    static const std::vector<Occurrence> empty;
    auto it = occurrences_.find(key);
    return it == occurrences_.end() ? empty : it->second;
}

std::size_t Program::fan_out(const SymbolArity& key) const {
    auto it = occurrences_.find(key);
    return it == occurrences_.end() ? 0 : it->second.size();
}

} // namespace chr
