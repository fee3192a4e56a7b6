// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_SYNTHESIS_HPP
#define GAPSLICE_SYNTHESIS_HPP

#include <memory>
#include <vector>

#include "gapslice/config.hpp"
#include "gapslice/cti.hpp"
#include "gapslice/eval.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/reach.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

/// A candidate lemma: a disjunctive clause of at most max-literals
/// (possibly negated) grammar predicates under one quantifier template.
/// `index` is the candidate's rank in the canonical enumeration order and
/// doubles as the deterministic tie-breaker.
struct Candidate {
  uint64_t index = 0;
  uint32_t tmpl = 0;
  std::vector<uint32_t> lits;  // predicate indices, strictly ascending
  uint32_t neg_mask = 0;       // bit i set = lits[i] negated
};

/// The finite space of candidates over a predicate subset. The canonical
/// enumeration order is: template index, then clause size k = 1..max, then
/// predicate combinations in lexicographic order, then negation masks in
/// binary counting order. unrank(i) decodes the i-th candidate, which lets
/// random sampling draw indices instead of structures: a sampled pool is a
/// subset of the same canonical order.
class CandidateSpace {
 public:
  /// `kept` are the grammar predicate indices usable after slicing (see
  /// grammar_slice); each template draws from those it type-checks with.
  /// The literal bound is min(grammar.max_literals, max_literals).
  static CandidateSpace build(const Grammar& g, const std::vector<uint32_t>& kept,
                              uint32_t max_literals);

  uint64_t total() const { return total_; }
  uint32_t max_literals() const { return max_literals_; }
  const std::vector<uint32_t>& template_preds(uint32_t t) const { return tmpl_preds_[t]; }

  Candidate unrank(uint64_t index) const;

  /// Builds the candidate's expression: quantifier prefix plus the clause.
  /// Predicate subtrees are shared with the grammar.
  Expr to_expr(const Candidate& c, const Grammar& g) const;

 private:
  const Grammar* g_ = nullptr;
  uint32_t max_literals_ = 0;
  std::vector<std::vector<uint32_t>> tmpl_preds_;
  // counts_[t][k] = C(|tmpl_preds_[t]|, k) * 2^k; bases for unranking.
  std::vector<std::vector<uint64_t>> counts_;
  std::vector<uint64_t> tmpl_base_;
  uint64_t total_ = 0;
};

/// Evaluates candidates over a fixed list of states using precomputed
/// truth bitmaps: one bitvector over the states per (template binding row,
/// usable predicate). A candidate evaluation is then a handful of word-wise
/// OR/AND folds instead of a tree walk per state, which is what makes
/// filtering tens of thousands of candidates against tens of thousands of
/// states practical.
class CandidateEvaluator {
 public:
  /// `states` are borrowed; they must outlive the evaluator. Matrix
  /// construction is split across `workers` (the result is identical for
  /// any worker count).
  CandidateEvaluator(const TransitionSystem& sys, const Instance& inst,
                     const Grammar& g, const CandidateSpace& space,
                     std::vector<StateView> states, unsigned workers);

  size_t num_states() const { return states_.size(); }
  size_t words() const { return words_; }

  /// Scratch buffers for eval; one per thread.
  struct Workspace {
    std::vector<std::vector<uint64_t>> levels;
  };

  /// out[w] bit b = truth of the candidate on states_[64w+b]. Bits past
  /// num_states() are 1 (they satisfy "holds on all" checks vacuously).
  void eval(const Candidate& c, Workspace& ws, std::vector<uint64_t>& out) const;

 private:
  struct TemplateMatrix {
    std::vector<uint32_t> domain_sizes;  // per binder, template order
    std::vector<uint32_t> strides;       // row-index stride per binder
    std::vector<bool> exists;            // per binder
    uint32_t rows = 1;
    std::vector<uint32_t> pred_slot;     // grammar pred index -> matrix slot (or -1)
    std::vector<uint64_t> bits;          // slot-major: [slot][row][word]
  };

  const uint64_t* row_bits(const TemplateMatrix& m, uint32_t slot, uint32_t row) const {
    return m.bits.data() + (size_t(slot) * m.rows + row) * words_;
  }
  void fold(const TemplateMatrix& m, const Candidate& c, Workspace& ws, size_t level,
            uint32_t row_base, uint64_t* out) const;

  std::vector<StateView> states_;
  size_t words_ = 0;
  uint64_t keep_last_ = 0;  // valid bits of the final word
  std::vector<TemplateMatrix> tmpls_;
};

/// The outcome of local invariant inference for one obligation.
struct LocalInferenceResult {
  bool success = false;
  std::vector<Expr> new_support;  // synthesized support lemmas, in pick order

  // Diagnostics for reports and logs.
  std::vector<uint32_t> slice;
  uint32_t sliced_preds = 0;     // grammar predicates kept by the slice
  uint64_t proj_states = 0;
  uint64_t pool_generated = 0;   // candidates drawn before dedup (last round)
  uint64_t pool_distinct = 0;    // after semantic dedup (last round)
  uint64_t pool_invariants = 0;  // after reachable-state filtering (last round)
  uint64_t ctis_initial = 0;
  uint64_t ctis_eliminated = 0;
  uint64_t ctis_remaining = 0;   // counterexamples left standing (failure only)
  uint32_t rounds = 0;           // candidate pools generated
  bool exhaustive_pool = false;
  bool exhaustive_cti = false;
  bool timed_out = false;
  std::string failure;  // empty on success
  // Up to five pretty-printed pre-states of surviving counterexamples,
  // recorded on failure so reports can show what was left unexplained.
  std::vector<std::string> sample_ctis;
};

/// Local invariant inference for the obligation (lemma, action) with the
/// already-present support lemmas. Synthesizes new support lemmas from the
/// sliced grammar by greedy counterexample elimination:
///
///   1. compute the variable slice and the grammar slice;
///   2. search for counterexamples to induction under the existing support;
///   3. build a candidate pool (enumerated exhaustively when the sliced
///      space fits in n_invs, sampled otherwise), drop semantic duplicates
///      (truth on a fixed 1024-state sample: projected reachable states in
///      canonical order, padded with seeded type-correct states), and keep
///      candidates that hold on every projected reachable state — such
///      candidates hold in all initial states by construction;
///   4. repeatedly pick the candidate eliminating the most remaining
///      counterexamples (ties: fewest literals, then lowest canonical
///      index) until none remain, re-querying for fresh counterexamples
///      after each clearing;
///   5. a pick that eliminates nothing fails immediately under an
///      exhaustive pool and otherwise resamples, up to max_rounds pools.
///
/// All randomness derives from `obligation_seed`; results are independent
/// of cfg.workers.
LocalInferenceResult local_inv_inference(
    const TransitionSystem& sys, const Instance& inst, const Grammar& g,
    const std::vector<Expr>& existing_support, const Expr& lemma, uint32_t action_ix,
    ProjectionCache& proj, const InferenceConfig& cfg, uint64_t obligation_seed,
    Deadline deadline = kNoDeadline);

}  // namespace gapslice

#endif  // GAPSLICE_SYNTHESIS_HPP
