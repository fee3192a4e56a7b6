// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_CONFIG_HPP
#define GAPSLICE_CONFIG_HPP

#include <cstdint>

namespace gapslice {

/// Tuning knobs for invariant inference. All sampling is driven by `seed`
/// through counter-based streams, so results are reproducible and
/// independent of `workers`.
struct InferenceConfig {
  /// Candidate pool size per generation round. When the grammar has fewer
  /// candidates than this, enumeration is exhaustive and deterministic even
  /// across seeds.
  uint64_t n_invs = 80000;

  /// Cap on distinct counterexamples kept per query.
  uint64_t n_ctis = 10000;

  /// Cap on literals per candidate clause; the effective bound is the
  /// smaller of this and the grammar's own maxliterals.
  uint32_t max_literals = 3;

  /// Candidate regeneration rounds before an obligation is given up. A
  /// round that was exhaustive and eliminated nothing fails immediately:
  /// re-enumerating the same pool cannot help.
  uint32_t max_rounds = 3;

  uint64_t seed = 0;

  /// 0 = use hardware concurrency.
  unsigned workers = 0;

  /// Per-obligation and whole-run wall-clock budgets, in seconds.
  double node_timeout_s = 600.0;
  double global_timeout_s = 14400.0;

  /// Counterexample queries enumerate the full type-correct state space
  /// when its size is at most this; above it they sample.
  uint64_t exhaustive_threshold = uint64_t(1) << 21;

  /// Randomized counterexample queries sample `cti_attempts_factor *
  /// n_ctis` candidate pre-states.
  uint64_t cti_attempts_factor = 64;
};

}  // namespace gapslice

#endif  // GAPSLICE_CONFIG_HPP
