// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_SLICING_HPP
#define GAPSLICE_SLICING_HPP

#include <vector>

#include "gapslice/expr.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

/// Cone of influence of variable `var` under `action`: the pre-state
/// variables its post-state value depends on. For an updated variable these
/// are the variables read by the update's right-hand side (an identity or
/// point update naturally includes the variable itself); a variable the
/// action does not write depends only on itself.
std::vector<uint32_t> cone_of_influence(const TransitionSystem& sys,
                                        uint32_t action_ix, uint32_t var);

/// The variable slice of the induction obligation for lemma body `lemma`
/// under `action`: variables read by the action's guard, by the lemma in
/// the pre-state, and by the cones of influence of every variable the
/// lemma reads in the post-state. Sorted ascending.
std::vector<uint32_t> variable_slice(const TransitionSystem& sys, const Expr& lemma,
                                     uint32_t action_ix);

/// Indices of grammar predicates usable under a variable slice: those whose
/// state variables all lie inside `slice`. Predicates that read no state
/// variable (parameter-only, e.g. equalities between bindings) are always
/// kept.
std::vector<uint32_t> grammar_slice(const Grammar& g,
                                    const std::vector<uint32_t>& slice);

}  // namespace gapslice

#endif  // GAPSLICE_SLICING_HPP
