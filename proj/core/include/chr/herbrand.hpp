/*
 * Copyright 2026 The chrkit authors.
 * License: Apache License 2.0
 */

#ifndef CHRKIT_HERBRAND_HPP
#define CHRKIT_HERBRAND_HPP

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "chr/bindings.hpp"
#include "chr/term.hpp"

namespace chr {

/// One-way matching substitution: rule-head variables to store-side terms.
/// Matching never binds store variables; only this map grows.
class MatchSubst {
public:
    const Term* lookup(VarId rule_var) const;
    void bind(VarId rule_var, Term t);
    std::size_t size() const { return entries_.size(); }
    /// Backtracking support for join enumeration: truncate to an earlier size.
    void truncate(std::size_t size);
    const std::vector<std::pair<VarId, Term>>& entries() const { return entries_; }

private:
    std::vector<std::pair<VarId, Term>> entries_;
};

/// Syntactic equality of two terms under dereferencing (what == asks).
/// Coinductive on variable cycles, so it terminates without occurs-check.
bool equal_under(const Bindings& b, const Term& a, const Term& c);

/// Matches a rule-head atom against a store atom dereferenced under b,
/// extending theta. Returns false (and leaves theta truncated by the caller)
/// when the candidate does not instantiate the pattern. b is never modified.
bool match_atom(const ConstraintAtom& pattern, const ConstraintAtom& candidate,
                const Bindings& b, MatchSubst& theta);
bool match_term(const Term& pattern, const Term& candidate, const Bindings& b,
                MatchSubst& theta);

enum class ArithStatus : std::uint8_t { ok, nonground, type_error };
struct ArithResult {
    ArithStatus status;
    std::int64_t value = 0;
};

/// Integer evaluation of + - * mod (mod is floored, sign of the divisor).
ArithResult eval_arith(const Term& t, const Bindings& b);
/// Like eval_arith but sees rule variables through theta first.
ArithResult eval_arith(const Term& t, const MatchSubst& theta, const Bindings& b);

/// Folds maximal ground arithmetic subterms to integers; everything else,
/// variables included, is left structurally intact.
Term normalize_arith(const Term& t, const Bindings& b);

enum class GuardStatus : std::uint8_t { holds, fails, nonground };

/// Evaluates a guard conjunction under theta and b. Ask-only: no store
/// variable is ever bound (the generation counter is untouched).
/// ==, \== and = are syntactic under dereferencing; comparisons need ground
/// integer operands, otherwise the result is nonground.
GuardStatus check_guard(const std::vector<ConstraintAtom>& guard, const MatchSubst& theta,
                        const Bindings& b);
GuardStatus check_guard_atom(const ConstraintAtom& g, const MatchSubst& theta,
                             const Bindings& b);

/// Instantiates a rule-side term: theta-bound variables become their store
/// terms, unmatched (body-local) variables get fresh runtime variables,
/// allocated once per distinct rule variable via fresh_map.
Term instantiate(const Term& t, const MatchSubst& theta, VarTable& vars,
                 std::unordered_map<VarId, VarId>& fresh_map);
ConstraintAtom instantiate(const ConstraintAtom& a, const MatchSubst& theta, VarTable& vars,
                           std::unordered_map<VarId, VarId>& fresh_map);

} // namespace chr

#endif // CHRKIT_HERBRAND_HPP
