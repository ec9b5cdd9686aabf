/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_STORE_HPP
#define CHRKIT_STORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "chr/bindings.hpp"
#include "chr/herbrand.hpp"
#include "chr/term.hpp"

namespace chr {

using ConstraintId = std::int64_t;

struct IdentifiedConstraint {
    ConstraintAtom atom;
    ConstraintId id = 0;
};

/// Records (rule name, matched head ids in kept++removed order). A tuple is
/// pruned as soon as one of its ids leaves the store; ids are never reused,
/// so a pruned tuple can never be re-matched.
class PropagationHistory {
public:
    using Tuple = std::pair<std::string, std::vector<ConstraintId>>;

    bool contains(const std::string& rule, const std::vector<ConstraintId>& ids) const {
        return tuples_.count({rule, ids}) > 0;
    }
    void add(const std::string& rule, std::vector<ConstraintId> ids) {
        tuples_.insert({rule, std::move(ids)});
    }
    void prune_id(ConstraintId id);
    std::size_t size() const { return tuples_.size(); }
    const std::set<Tuple>& tuples() const { return tuples_; }

private:
    std::set<Tuple> tuples_;
};

/// The identified CHR constraint store with partner-lookup indexes:
/// symbol index, per-argument ground-value hash index (with a nonground
/// bucket so lookups stay complete without reindexing), and variable
/// attachments for reactivation.
class Store {
public:
    /// Stores the atom as given (callers normalize arithmetic first) and
    /// indexes it under the current bindings. Returns the new id.
    ConstraintId introduce(ConstraintAtom atom, const Bindings& b);

    /// Removes a live constraint and prunes history tuples mentioning it.
    /// Removing a non-live id is a defect.
    void remove(ConstraintId id, PropagationHistory& history);

    /// Re-derives the index footprint of every constraint attached to v.
    /// Engines call this right after a built-in binds v.
    void on_bound(VarId v, const Bindings& b);
    void reindex(ConstraintId id, const Bindings& b);

    /// Candidate partners for a rule-head pattern under theta: a superset of
    /// all live constraints matching the pattern. Narrowing preference per
    /// argument: ground value index, else variable attachment, else the
    /// symbol index. Ascending id order.
    std::vector<ConstraintId> candidates(const ConstraintAtom& pattern, const MatchSubst& theta,
                                         const Bindings& b) const;

    bool is_live(ConstraintId id) const { return live_.count(id) > 0; }
    const IdentifiedConstraint& get(ConstraintId id) const { return live_.at(id); }
    std::size_t size() const { return live_.size(); }
    ConstraintId next_id() const { return next_id_; }
    const std::map<ConstraintId, IdentifiedConstraint>& live() const { return live_; }

    /// Ids of constraints attached to an unbound variable (reactivation set).
    std::vector<ConstraintId> attached(VarId v) const;

    // Index introspection for invariant-checking tests.
    const std::map<SymbolArity, std::set<ConstraintId>>& symbol_index() const {
        return by_symbol_;
    }
    const std::map<VarId, std::set<ConstraintId>>& variable_index() const { return by_var_; }
    struct ArgBuckets {
        std::map<std::uint64_t, std::set<ConstraintId>> ground;
        std::set<ConstraintId> nonground;
    };
    const std::map<std::pair<SymbolArity, std::uint32_t>, ArgBuckets>& argument_index() const {
        return by_arg_;
    }

private:
    struct Footprint {
        std::vector<std::optional<std::uint64_t>> arg_hash; // nullopt = nonground
        std::vector<VarId> vars;
    };
    Footprint footprint_of(const ConstraintAtom& atom, const Bindings& b) const;
    void index_in(ConstraintId id, const Footprint& fp, const SymbolArity& key);
    void index_out(ConstraintId id, const Footprint& fp, const SymbolArity& key);

    std::map<ConstraintId, IdentifiedConstraint> live_;
    std::map<ConstraintId, Footprint> footprints_;
    std::map<SymbolArity, std::set<ConstraintId>> by_symbol_;
    std::map<std::pair<SymbolArity, std::uint32_t>, ArgBuckets> by_arg_;
    std::map<VarId, std::set<ConstraintId>> by_var_;
    ConstraintId next_id_ = 1;
};

/// Structural hash of a ground term (dereferenced under b).
std::uint64_t hash_ground_term(const Term& t, const Bindings& b);

} // namespace chr

#endif // CHRKIT_STORE_HPP
