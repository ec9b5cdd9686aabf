/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_BINDINGS_HPP
#define CHRKIT_BINDINGS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chr/term.hpp"

namespace chr {

/// Allocates runtime variables and remembers their display names.
/// Query variables keep their parsed names; fresh variables are named _0, _1, ...
class VarTable {
public:
    VarId intern(std::string name) {
        names_.push_back(std::move(name));
        return static_cast<VarId>(names_.size() - 1);
    }
    VarId fresh() { return intern("_" + std::to_string(fresh_count_++)); }
    const std::string& name(VarId v) const { return names_.at(static_cast<std::size_t>(v)); }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    int fresh_count_ = 0;
};

/// A trail mark; marks nest LIFO.
struct Checkpoint {
    std::size_t trail_size = 0;
};

/// The built-in store in substitution form: bindings of runtime variables,
/// with an undo trail. Binding events bump the generation counter, which is
/// how guard purity is observable.
class Bindings {
public:
    explicit Bindings(bool occurs_check = false) : occurs_check_(occurs_check) {}

    bool occurs_check() const { return occurs_check_; }
    void set_occurs_check(bool on) { occurs_check_ = on; }
    std::uint64_t generation() const { return generation_; }

    bool is_bound(VarId v) const {
        auto i = static_cast<std::size_t>(v);
        return i < cells_.size() && cells_[i].has_value();
    }

    /// Follows variable chains until a non-variable term or an unbound
    /// variable; a visited guard makes this terminate even on var cycles.
    Term resolve(const Term& t) const;

    /// Deep dereference: rebuilds the term with every bound variable replaced.
    /// Cycles are cut by printing the looping variable itself.
    Term expand(const Term& t) const;

    /// Unification with trailing. On failure the bindings are restored to
    /// the state at entry.
    bool unify(const Term& a, const Term& b);

    Checkpoint checkpoint() const { return Checkpoint{trail_.size()}; }
    void undo_to(const Checkpoint& mark);

    std::size_t trail_size() const { return trail_.size(); }
    /// Variables bound since the given trail position (most recent last).
    std::vector<VarId> bound_since(std::size_t trail_pos) const;

    bool is_ground(const Term& t) const;
    /// Unbound variables mentioned by t after dereferencing, deduplicated.
    void collect_vars(const Term& t, std::vector<VarId>& out) const;

private:
    bool unify_rec(const Term& a, const Term& b,
                   std::vector<std::pair<VarId, VarId>>& guard);
    bool occurs(VarId v, const Term& t, std::vector<VarId>& path) const;
    void bind(VarId v, Term t);

    std::vector<std::optional<Term>> cells_;
    std::vector<VarId> trail_;
    std::uint64_t generation_ = 0;
    bool occurs_check_;
};

} // namespace chr

#endif // CHRKIT_BINDINGS_HPP
