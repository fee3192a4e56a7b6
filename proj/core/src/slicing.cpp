// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/slicing.hpp"

#include <algorithm>

namespace gapslice {

namespace {

void sort_unique(std::vector<uint32_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<uint32_t> cone_of_influence(const TransitionSystem& sys,
                                        uint32_t action_ix, uint32_t var) {
  const ActionDecl& a = sys.actions[action_ix];
  for (const auto& [v, rhs] : a.updates) {
    if (v != var) continue;
    std::vector<uint32_t> unprimed, primed;
    collect_vars(*rhs, unprimed, primed);
    return unprimed;  // already sorted and deduplicated
  }
  return {var};
}

std::vector<uint32_t> variable_slice(const TransitionSystem& sys, const Expr& lemma,
                                     uint32_t action_ix) {
  std::vector<uint32_t> slice;

  const ActionDecl& a = sys.actions[action_ix];
  if (a.require) {
    std::vector<uint32_t> unprimed, primed;
    collect_vars(*a.require, unprimed, primed);
    slice.insert(slice.end(), unprimed.begin(), unprimed.end());
  }

  std::vector<uint32_t> lemma_vars, lemma_primed;
  collect_vars(*lemma, lemma_vars, lemma_primed);
  slice.insert(slice.end(), lemma_vars.begin(), lemma_vars.end());

  // The post-state copy of the lemma reads exactly the lemma's variables;
  // pull in what each of their updates reads.
  for (uint32_t v : lemma_vars) {
    std::vector<uint32_t> coi = cone_of_influence(sys, action_ix, v);
    slice.insert(slice.end(), coi.begin(), coi.end());
  }

  sort_unique(slice);
  return slice;
}

std::vector<uint32_t> grammar_slice(const Grammar& g,
                                    const std::vector<uint32_t>& slice) {
  std::vector<uint32_t> kept;
  for (uint32_t p = 0; p < g.preds.size(); ++p) {
    const auto& pv = g.pred_vars[p];
    bool inside = std::includes(slice.begin(), slice.end(), pv.begin(), pv.end());
    if (inside) kept.push_back(p);  // parameter-only predicates have pv empty
  }
  return kept;
}

}  // namespace gapslice
