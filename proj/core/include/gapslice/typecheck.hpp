// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_TYPECHECK_HPP
#define GAPSLICE_TYPECHECK_HPP

// Name resolution and type checking, shared by the parser entry points and
// by graph-file import. Everything here is an implementation detail of
// parse_spec / parse_grammar / parse_instance / parse_lemma_body; use those
// instead.

#include <string>
#include <utility>
#include <vector>

#include "gapslice/expr.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/system.hpp"

namespace gapslice::detail {

/// Checks every grammar predicate under the grammar's templates, fills in
/// Grammar::pred_vars, and rejects predicates that fit no template.
void typecheck_grammar(Grammar& g, const TransitionSystem& sys,
                       const std::string& filename);

/// Evaluates raw instance declarations into Values bound to `sys` (sort
/// indices in system order), then validates the instance.
Instance bind_instance(
    std::vector<Instance::SortDef> sorts,
    std::vector<std::pair<std::string, Expr>> consts,
    std::vector<std::pair<std::string, std::pair<int64_t, int64_t>>> ranges,
    const TransitionSystem& sys, const std::string& filename);

/// Checks a closed boolean expression (a lemma body) against `sys`.
void typecheck_lemma_body(Expr& e, const TransitionSystem& sys,
                          const std::string& filename);

}  // namespace gapslice::detail

#endif  // GAPSLICE_TYPECHECK_HPP
