// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_REACH_HPP
#define GAPSLICE_REACH_HPP

#include <map>
#include <string>
#include <vector>

#include "gapslice/eval.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/state.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

struct ReachOptions {
  uint64_t max_states = 0;  // 0 = unlimited
  double timeout_s = 0;     // 0 = none
};

struct ReachResult {
  StateSet states;          // full schema; insertion order = BFS order
  uint64_t transitions = 0; // transitions explored (including duplicates)
  uint32_t depth = 0;       // depth of the deepest explored frontier
  bool complete = true;     // false if max_states or timeout_s stopped the search
};

/// Breadth-first enumeration of the reachable states. Deterministic:
/// initial states and successor transitions are explored in canonical
/// order, so insertion ids are reproducible.
ReachResult reachable_states(const TransitionSystem& sys, const Instance& inst,
                             const ReachOptions& opts = {});

/// Memoized projections of a reachable set onto variable subsets, with
/// optional disk persistence. Projection deduplicates rows, which is what
/// makes slicing pay off: the projected set is usually orders of magnitude
/// smaller than the full one.
class ProjectionCache {
 public:
  /// `dir` empty = in-memory only. On disk, entries are keyed by the spec,
  /// instance and schema hashes.
  ProjectionCache(const TransitionSystem& sys, const StateSet& full,
                  uint64_t spec_hash, uint64_t inst_hash, std::string dir = "");

  /// The projection of the full set onto `vars` (system variable indices).
  /// The reference stays valid for the cache's lifetime.
  ///
  /// Row ids depend on whether the projection was computed or loaded from
  /// disk; consumers that need a reproducible order must use
  /// StateSet::canonical_order(), which is identical either way.
  const StateSet& project(const std::vector<uint32_t>& vars);

  /// Number of distinct projections computed so far (cache misses).
  size_t computed() const { return computed_; }

 private:
  const TransitionSystem& sys_;
  const StateSet& full_;
  uint64_t spec_hash_, inst_hash_;
  std::string dir_;
  std::map<std::vector<uint32_t>, StateSet> cache_;
  size_t computed_ = 0;
};

}  // namespace gapslice

#endif  // GAPSLICE_REACH_HPP
