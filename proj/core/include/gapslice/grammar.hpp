// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_GRAMMAR_HPP
#define GAPSLICE_GRAMMAR_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gapslice/expr.hpp"

namespace gapslice {

/// A quantifier template: the prefix under which candidate lemmas are
/// formed, e.g. `forall i in Node, exists Q in Quorum, forall v in Value`.
struct QuantTemplate {
  struct Entry {
    bool exists = false;
    Binder binder;
  };
  std::vector<Entry> entries;
};

/// A lemma-synthesis grammar: one or more quantifier templates, a pool of
/// atomic predicates over the template bindings and state variables, and
/// the maximum number of literals per candidate clause.
struct Grammar {
  std::vector<QuantTemplate> templates;
  std::vector<Expr> preds;
  uint32_t max_literals = 3;

  /// For each predicate, the state variables it reads (ascending indices).
  /// Filled in by parse_grammar.
  std::vector<std::vector<uint32_t>> pred_vars;

  /// For each predicate, a bitmask of the templates it type-checks under
  /// (bit t = templates[t]). Filled in by parse_grammar; never zero.
  std::vector<uint32_t> pred_templates;
};

}  // namespace gapslice

#endif  // GAPSLICE_GRAMMAR_HPP
