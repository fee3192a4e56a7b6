// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_CTI_HPP
#define GAPSLICE_CTI_HPP

#include <chrono>
#include <optional>
#include <vector>

#include "gapslice/eval.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/state.hpp"
#include "gapslice/system.hpp"
#include "gapslice/util/hash.hpp"

namespace gapslice {

using Deadline = std::chrono::steady_clock::time_point;
constexpr Deadline kNoDeadline = Deadline::max();

/// One induction obligation of the proof graph: lemma node `lemma` must be
/// preserved by `action`, assuming the lemmas in `support` in the
/// pre-state.
struct Obligation {
  uint32_t lemma = 0;
  uint32_t action = 0;
  std::vector<uint32_t> support;
};

/// A counterexample to induction for an obligation: a type-correct
/// pre-state satisfying the support lemmas, the target lemma and the
/// action's guard under `binding`, whose successor violates the lemma.
struct Cti {
  State pre;
  std::vector<Value> binding;
  State post;
};

/// Number of type-correct states (product of variable type sizes),
/// saturating at 2^63-1. Decides exhaustive vs sampled checking.
uint64_t type_state_space_size(const TransitionSystem& sys, const Instance& inst);

/// Enumerates every type-correct state in canonical order (variables in
/// declaration order, last variable fastest). fn returns false to stop.
void for_each_type_state(const TransitionSystem& sys, const Instance& inst,
                         const std::function<bool(const State&)>& fn);

/// Draws uniform type-correct values: booleans and range integers uniform,
/// sets by an independent coin per element (uniform over all subsets),
/// functions by an independent draw per key. Construction is cheap; the
/// per-type element pools are built once.
class StateSampler {
 public:
  StateSampler(const TransitionSystem& sys, const Instance& inst);
  State sample(Rng& rng) const;
  Value sample_var(uint32_t var, Rng& rng) const;

  struct Plan;  // per-type sampling plan; defined in cti.cpp

 private:
  std::vector<std::shared_ptr<const Plan>> plans_;  // per variable
};

struct CtiOptions {
  uint64_t n_ctis = 10000;   // stop after this many distinct counterexamples
  uint64_t seed = 0;         // sampling stream (randomized mode)
  uint64_t attempts = 640000;  // sampled pre-states (randomized mode)
  uint64_t exhaustive_threshold = uint64_t(1) << 21;
  unsigned workers = 0;
};

struct CtiResult {
  /// Distinct counterexamples in a deterministic order: type-space
  /// enumeration order when exhaustive, attempt-index order when sampled.
  std::vector<Cti> ctis;
  bool exhaustive = false;  // the whole type-correct space was scanned
  bool complete = true;     // false if the cap or deadline stopped the scan
  uint64_t checked = 0;     // pre-states examined
};

/// Searches for counterexamples to `support ∪ {lemma}` being inductive for
/// `lemma` under `action_ix`. Exhaustive when the type-correct state space
/// is within opts.exhaustive_threshold, sampled otherwise. Results are
/// independent of opts.workers.
CtiResult generate_ctis(const TransitionSystem& sys, const Instance& inst,
                        const std::vector<Expr>& support, const Expr& lemma,
                        uint32_t action_ix, const CtiOptions& opts,
                        Deadline deadline = kNoDeadline);

/// First counterexample, if any. Convenience wrapper for validity checks.
std::optional<Cti> find_cti(const TransitionSystem& sys, const Instance& inst,
                            const std::vector<Expr>& support, const Expr& lemma,
                            uint32_t action_ix, const CtiOptions& opts,
                            Deadline deadline = kNoDeadline);

/// Does the lemma hold in every initial state?
bool holds_on_init(const TransitionSystem& sys, const Instance& inst, const Expr& lemma);

}  // namespace gapslice

#endif  // GAPSLICE_CTI_HPP
