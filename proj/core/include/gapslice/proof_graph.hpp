// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_PROOF_GRAPH_HPP
#define GAPSLICE_PROOF_GRAPH_HPP

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "gapslice/config.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/reach.hpp"
#include "gapslice/synthesis.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

/// Discharge status of one induction obligation (lemma node x action).
enum class ObligationStatus : uint8_t {
  Unknown,        // not yet attempted
  SelfInductive,  // the action writes no variable the lemma reads
  Valid,          // locally valid under the recorded supports
  Failed,         // local inference gave up
};

const char* to_string(ObligationStatus s);

/// One action obligation of a lemma node, with the support edges and the
/// inference diagnostics that went into discharging it.
struct ActionNode {
  uint32_t action = 0;  // action index in the system
  ObligationStatus status = ObligationStatus::Unknown;
  std::vector<uint32_t> supports;  // lemma node ids assumed in the pre-state

  // Local-inference diagnostics (zero until discharged).
  std::vector<uint32_t> slice;
  uint32_t sliced_preds = 0;
  uint64_t proj_states = 0;
  uint64_t pool_generated = 0;
  uint64_t pool_distinct = 0;
  uint64_t pool_invariants = 0;
  uint64_t ctis_initial = 0;
  uint64_t ctis_eliminated = 0;
  uint64_t ctis_remaining = 0;
  uint32_t rounds = 0;
  bool exhaustive_pool = false;
  bool exhaustive_cti = false;
  std::string failure;                   // reason, when status == Failed
  std::vector<std::string> sample_ctis;  // surviving pre-states (<= 5)
};

/// A lemma in the proof graph: the root safety property or a synthesized
/// support lemma, with one obligation per system action.
struct LemmaNode {
  std::string name;  // root keeps its declared name; synthesized are L1, L2, ...
  Expr body;
  uint32_t depth = 0;  // distance from the root at creation time
  std::vector<ActionNode> actions;  // one per action, declaration order
};

/// An inductive proof graph: the root safety lemma plus the support lemmas
/// synthesized for its obligations. The graph is valid when every
/// obligation is Valid or SelfInductive; a valid graph whose lemmas all
/// hold initially proves the conjunction of its lemmas inductive (support
/// cycles are fine -- validity is checked obligation-locally).
struct ProofGraph {
  struct Meta {
    std::string protocol;
    uint64_t spec_hash = 0;
    uint64_t instance_hash = 0;
    std::string root;
    uint64_t seed = 0;
    uint64_t full_states = 0;  // |reachable| of the run's instance
    // Configuration echo for reproducibility. `workers` is not serialized:
    // the graph must be byte-identical across worker counts.
    InferenceConfig config;
  };

  Meta meta;
  std::vector<LemmaNode> nodes;  // [0] is the root; creation order

  /// Node id by lemma name, or -1.
  int32_t find(const std::string& name) const;

  bool all_discharged() const;

  /// Failed obligations as (lemma name, action name) pairs, node order.
  std::vector<std::pair<std::string, std::string>> failed_obligations(
      const TransitionSystem& sys) const;

  /// The conjunction of every lemma body: the inductive invariant of a
  /// valid graph. Throws std::logic_error when any obligation is still
  /// open or failed -- an invalid graph proves nothing.
  Expr invariant() const;
};

/// Per-obligation record of one orchestration iteration.
struct ObligationRecord {
  std::string lemma;
  std::string action;
  ObligationStatus status = ObligationStatus::Unknown;
  double seconds = 0;
  LocalInferenceResult inference;
  std::vector<std::string> new_lemmas;  // support nodes created or linked
};

struct RunResult {
  ProofGraph graph;
  std::vector<ObligationRecord> iterations;
  double total_seconds = 0;
  bool initiation = false;  // every lemma holds in every initial state
  bool timed_out = false;   // the global deadline interrupted the run
  bool success = false;     // all obligations discharged and initiation holds
};

/// One-line log format for an orchestration iteration (no trailing
/// newline). The CLI prints one such line to stderr per obligation.
/// Fields: slice=<vars>v/<preds>p, ctis=initial/eliminated/remaining,
/// pool=generated/distinct/invariants.
std::string format_iteration(const ObligationRecord& rec, uint32_t depth);

/// Runs the proof-slice orchestration for the declared lemma `root_name`:
/// initializes the graph with the root's obligations, then repeatedly picks
/// the open obligation with the smallest (depth, action, creation) key and
/// discharges it by local inference, adding synthesized support lemmas --
/// and their own obligations -- to the graph. Obligations whose action
/// writes none of the lemma's variables are discharged eagerly. A failed
/// obligation is recorded and skipped, keeping any partial support it
/// synthesized (proven subgraphs under a failure still certify their own
/// lemmas); the run continues. When the global deadline expires, every
/// still-open obligation is marked failed.
///
/// Support lemmas are deduplicated against existing nodes: first by the
/// canonical rendering of the body, then -- on instances whose type-correct
/// state space is within cfg.exhaustive_threshold -- by exhaustive semantic
/// equivalence, so an equal lemma adds an edge rather than a node. A lemma
/// equal to the obligation's own target is dropped: the target already sits
/// in the induction antecedent, so a self-edge would add nothing.
///
/// `full_states` is the size of the reachable set behind `proj`. If `log`
/// is non-null, one line per iteration is written to it.
RunResult run_inference(const TransitionSystem& sys, const Instance& inst,
                        const Grammar& g, const std::string& root_name,
                        uint64_t full_states, ProjectionCache& proj,
                        const InferenceConfig& cfg, std::ostream* log = nullptr);

struct CheckOptions {
  uint64_t n_ctis = 1;  // counterexamples to report per refuted obligation
  uint64_t seed = 0;
  uint64_t attempts = 640000;
  uint64_t exhaustive_threshold = uint64_t(1) << 21;
  unsigned workers = 0;
};

struct CheckResult {
  bool valid = false;       // every obligation re-verified, initiation holds
  bool exhaustive = false;  // every check scanned the whole type space
  std::vector<std::string> problems;
  std::vector<std::string> verdicts;  // one line per initiation / obligation check
};

/// Re-verifies a proof graph from scratch against the system: every
/// obligation is checked for local validity (self-inductive claims are
/// re-derived; valid claims are re-searched for counterexamples), and every
/// lemma for initiation.
CheckResult check_graph(const TransitionSystem& sys, const Instance& inst,
                        const ProofGraph& graph, const CheckOptions& opts = {});

/// Graph (de)serialization. The JSON format is versioned
/// ("gapslice-graph-v1"), deterministic (fixed key order, no timing data),
/// and round-trips exactly: from_json(to_json(g)) re-exports to identical
/// bytes. from_json validates the protocol name against `sys` (and the
/// spec hash, unless `enforce_spec_hash` is false for callers that check
/// hashes themselves) and re-type-checks every lemma body; errors throw
/// ParseError or std::runtime_error.
std::string graph_to_json(const ProofGraph& graph, const TransitionSystem& sys);
ProofGraph graph_from_json(const std::string& text, const TransitionSystem& sys,
                           const std::string& filename = "<graph>",
                           bool enforce_spec_hash = true);

/// Graphviz rendering: lemma ellipses, obligation boxes annotated with the
/// variable slice and the projected/full state counts, support edges.
/// Self-inductive obligations are omitted; failed ones are highlighted.
std::string graph_to_dot(const ProofGraph& graph, const TransitionSystem& sys);

/// Human-readable run summary (lemmas, obligations, slices, reductions).
std::string graph_report(const ProofGraph& graph, const TransitionSystem& sys);

/// Run manifest: configuration, environment and wall-time record of an
/// inference run ("gapslice-manifest-v1"). Kept separate from the graph
/// file so the graph stays byte-stable across reruns.
std::string manifest_to_json(const TransitionSystem& sys, const Instance& inst,
                             const InferenceConfig& cfg, const RunResult& run,
                             const std::string& started_at);

}  // namespace gapslice

#endif  // GAPSLICE_PROOF_GRAPH_HPP
