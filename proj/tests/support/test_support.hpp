// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Shared fixtures and independent oracles for the test suites.
//
// The oracles here deliberately avoid the engine code paths they are used
// to judge: reachability is re-derived with a plain set-of-encodings BFS,
// inductiveness with a direct scan of the type-correct state space, and
// CTIs with the three defining checks spelled out one eval at a time.
#ifndef GAPSLICE_TESTS_SUPPORT_HPP
#define GAPSLICE_TESTS_SUPPORT_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gapslice/cti.hpp"
#include "gapslice/eval.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/parser.hpp"
#include "gapslice/reach.hpp"
#include "gapslice/state.hpp"
#include "gapslice/system.hpp"

namespace gapslice::test {

// ---------------------------------------------------------------------------
// Files and fixtures

/// Absolute path of a file in the checked-in models directory.
std::string model_path(const std::string& name);

/// Reads a whole file; aborts the test run if it does not exist.
std::string slurp(const std::string& path);

/// A parsed protocol + instance + grammar triple. Fixtures are parsed once
/// per test binary and shared; treat them as immutable.
struct Model {
  TransitionSystem sys;
  Instance inst;
  Grammar grammar;
};

/// Parses (and memoizes) a model triple from the models directory.
/// `grm_file` may be empty for models exercised without a grammar.
const Model& load_model(const std::string& spec_file, const std::string& inst_file,
                        const std::string& grm_file);

const Model& ring();                    // ring_counter at the stock instance
const Model& two_phase_rm2();
const Model& two_phase_rm3();
const Model& consensus_n2();            // SimpleConsensus |Node|=2,|Value|=2
const Model& consensus_n3();            // SimpleConsensus |Node|=3,|Value|=2
const Model& consensus_n3_noquorum();   // same instance, grammar minus Q-preds

/// Memoized exhaustive reachable set of a fixture model.
const ReachResult& reach_of(const Model& m);

// ---------------------------------------------------------------------------
// Evaluation helpers

/// Evaluates a closed boolean expression on a full state.
bool eval_on(const Model& m, const Expr& e, const State& s);

/// Evaluates on a StateSet row through the set's column map; the set's
/// schema must cover every variable the expression reads.
bool eval_on_row(const Model& m, const Expr& e, const StateSet& set, uint32_t row);

/// Parses an expression against the model's system.
Expr expr(const Model& m, const std::string& text);

/// The conjunction of every declared lemma, evaluated directly.
bool declared_lemmas_hold(const Model& m, const State& s);

/// Reconstructs a full State from a full-schema StateSet row (the set's
/// schema is name-sorted; State wants declaration order).
State state_of_row(const TransitionSystem& sys, const StateSet& set, uint32_t row);

/// Encodes a full state in `set`'s schema order; usable with find_encoding.
std::string encode_for(const StateSet& set, const State& s);

/// True when the full state is a member of the (full-schema) set.
bool contains_state(const StateSet& set, const State& s);

// ---------------------------------------------------------------------------
// Independent oracles

/// Number of type-correct states satisfying `e` (full scan).
uint64_t count_satisfying(const Model& m, const Expr& e);

/// `e` holds on every type-correct state.
bool holds_everywhere(const Model& m, const Expr& e);

/// `a` and `b` agree on every type-correct state.
bool semantically_equal(const Model& m, const Expr& a, const Expr& b);

/// Direct initiation + consecution check of Eq. "inductive invariant":
/// collects every type-correct state satisfying `e`, then verifies all
/// initial states are members and no member has a successor outside.
struct InductiveVerdict {
  bool initiation = false;
  uint64_t satisfying = 0;              // |{s type-correct : e(s)}|
  uint64_t consecution_violations = 0;  // successor pairs leaving the set
  bool inductive() const { return initiation && consecution_violations == 0; }
};
InductiveVerdict oracle_inductive(const Model& m, const Expr& e);

/// Direct check of one local obligation: for every type-correct pre-state
/// satisfying supports ∧ lemma and every enabled binding of the action, the
/// successor satisfies the lemma. Full scan; keep to small instances.
bool oracle_obligation_valid(const Model& m, const std::vector<Expr>& supports,
                             const Expr& lemma, uint32_t action_ix);

/// Re-verifies the three defining checks of a counterexample to induction:
/// pre ⊨ supports ∧ lemma, apply_action(pre, binding) = post, post ⊭ lemma.
/// The guard is re-checked too (a disabled action has no successor).
bool is_genuine_cti(const Model& m, const std::vector<Expr>& supports,
                    const Expr& lemma, uint32_t action_ix, const Cti& cti);

/// Independent reachability: BFS over canonical encodings with ordinary
/// standard-library containers. Returns the encodings of every reachable
/// full state (in the StateSet full-schema encoding form).
std::vector<std::string> oracle_reach_encodings(const Model& m);

// ---------------------------------------------------------------------------
// Subprocess driver (CLI and acceptance tests)

/// Path of the installed command-line binary (compiled in).
std::string cli_path();

struct CmdResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

/// Runs the CLI with the given arguments, capturing both streams.
CmdResult run_cli(const std::vector<std::string>& args);

/// Runs an arbitrary command line (already quoted), capturing both streams.
CmdResult run_command(const std::string& command_line);

/// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::string& path() const { return path_; }
  std::string file(const std::string& name) const { return path_ + "/" + name; }

 private:
  std::string path_;
};

/// Writes text to a file, creating parent directories as needed.
void write_file(const std::string& path, const std::string& text);

}  // namespace gapslice::test

#endif  // GAPSLICE_TESTS_SUPPORT_HPP
