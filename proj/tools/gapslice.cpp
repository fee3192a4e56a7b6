// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// gapslice command-line driver.
//
// Exit codes:
//   0  success (valid graph inferred / check passed / command completed)
//   1  input error (bad arguments, unreadable or unparsable files,
//      graph/spec hash mismatch without --force)
//   2  resource limit (global inference timeout; reach budget exhausted
//      before the frontier emptied)
//   3  inference finished but the graph is not valid (failed obligations,
//      or the root lemma does not hold initially)
//   4  check: the graph did not verify
//
// Every run emits a manifest: to the path given with --manifest, otherwise
// as a single `manifest: {...}` line on the log stream (stderr). Every
// artifact path printed on stdout exists by the time the process exits.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "gapslice/cti.hpp"
#include "gapslice/eval.hpp"
#include "gapslice/parser.hpp"
#include "gapslice/proof_graph.hpp"
#include "gapslice/reach.hpp"
#include "gapslice/slicing.hpp"
#include "gapslice/synthesis.hpp"
#include "gapslice/util/hash.hpp"

namespace {

using namespace gapslice;
using ordered_json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
}

std::string now_utc() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

/// Writes the manifest to `path` and prints the path, or -- when no path
/// was requested -- logs the manifest as a single structured line.
void emit_manifest(const std::string& path, const ordered_json& j) {
  if (!path.empty()) {
    write_file(path, j.dump(2) + "\n");
    std::cout << "manifest: " << path << "\n";
  } else {
    std::cerr << "manifest: " << j.dump() << "\n";
  }
}

void emit_manifest(const std::string& path, const std::string& json_text) {
  emit_manifest(path, ordered_json::parse(json_text));
}

ordered_json base_manifest(const char* command, const std::string& started) {
  ordered_json j;
  j["format"] = "gapslice-manifest-v1";
  j["command"] = command;
  j["started_at"] = started;
  return j;
}

std::string reach_cache_path(const std::string& dir, uint64_t spec_hash,
                             uint64_t inst_hash) {
  return dir + "/" + hash_hex(spec_hash) + "-" + hash_hex(inst_hash) + ".reach";
}

/// The full reachable set, from the cache directory when a valid entry
/// exists, otherwise computed and (best-effort) saved back.
StateSet load_or_compute_reach(const TransitionSystem& sys, const Instance& inst,
                               const std::string& cache_dir) {
  uint64_t sh = sys.content_hash(), ih = inst.content_hash();
  std::string path;
  if (!cache_dir.empty()) {
    path = reach_cache_path(cache_dir, sh, ih);
    try {
      StateSet s = StateSet::load(path, sys, sh, ih);
      std::cerr << "reachable states: " << s.size() << " (cached)\n";
      return s;
    } catch (const CacheError&) {
      // fall through to recompute
    }
  }
  ReachResult r = reachable_states(sys, inst);
  std::cerr << "reachable states: " << r.states.size() << "\n";
  if (!path.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(cache_dir, ec);
    if (!ec) {
      try {
        r.states.save(path, sh, ih);
      } catch (const CacheError&) {
        // caching is best-effort
      }
    }
  }
  return std::move(r.states);
}

/// Maps a --mode value onto the exhaustive-vs-sampled threshold:
/// "exhaustive" forces full type-space scans, "sampled" forbids them,
/// "auto" keeps the configured threshold.
uint64_t apply_mode(const std::string& mode, uint64_t threshold) {
  if (mode == "exhaustive") return std::numeric_limits<uint64_t>::max();
  if (mode == "sampled") return 0;
  return threshold;
}

struct InferArgs {
  std::string spec, instance, grammar, lemma;
  std::string out, manifest, dot, cache;
  std::string mode = "auto";
  InferenceConfig cfg;
};

int cmd_infer(InferArgs a) {
  TransitionSystem sys = parse_spec(read_file(a.spec), a.spec);
  Instance inst = parse_instance(read_file(a.instance), sys, a.instance);
  Grammar g = parse_grammar(read_file(a.grammar), sys, a.grammar);
  a.cfg.exhaustive_threshold = apply_mode(a.mode, a.cfg.exhaustive_threshold);

  std::string started = now_utc();
  StateSet full = load_or_compute_reach(sys, inst, a.cache);
  uint64_t full_states = full.size();
  ProjectionCache proj(sys, full, sys.content_hash(), inst.content_hash(), a.cache);

  RunResult run = run_inference(sys, inst, g, a.lemma, full_states, proj, a.cfg, &std::cerr);

  std::string graph_json = graph_to_json(run.graph, sys);
  if (!a.out.empty()) {
    write_file(a.out, graph_json);
    std::cout << "graph: " << a.out << "\n";
  } else {
    std::cout << graph_json;
  }
  if (!a.dot.empty()) {
    write_file(a.dot, graph_to_dot(run.graph, sys));
    std::cout << "dot: " << a.dot << "\n";
  }
  emit_manifest(a.manifest, manifest_to_json(sys, inst, a.cfg, run, started));

  if (!a.out.empty()) std::cout << graph_report(run.graph, sys);
  for (const auto& [lemma, action] : run.graph.failed_obligations(sys))
    std::cout << "failed: lemma=" << lemma << " action=" << action << "\n";
  if (run.timed_out) {
    std::cout << "result: global timeout after " << run.iterations.size()
              << " obligation(s)\n";
    return 2;
  }
  if (!run.success) {
    if (!run.initiation)
      std::cout << "result: the property does not hold in every initial state\n";
    else
      std::cout << "result: partial proof graph ("
                << run.graph.failed_obligations(sys).size() << " obligation(s) failed)\n";
    return 3;
  }
  std::cout << "result: valid inductive proof graph (" << run.graph.nodes.size()
            << " lemma(s))\n";
  return 0;
}

struct ReachArgs {
  std::string spec, instance, out, cache, manifest;
  std::string mode = "exhaustive";
  uint64_t budget = 0;
  double timeout_s = 0;
};

int cmd_reach(const ReachArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  std::string started = now_utc();
  TransitionSystem sys = parse_spec(read_file(a.spec), a.spec);
  Instance inst = parse_instance(read_file(a.instance), sys, a.instance);
  ReachOptions opts;
  opts.max_states = a.budget;
  opts.timeout_s = a.timeout_s;
  ReachResult r = reachable_states(sys, inst, opts);

  // The state count is the primary output; everything else is log detail.
  std::cout << r.states.size() << "\n";
  std::cout << "provenance: " << (r.complete ? "exhaustive" : "sampled") << "\n";
  std::cerr << "transitions: " << r.transitions << "\n";
  std::cerr << "depth: " << r.depth << "\n";

  uint64_t sh = sys.content_hash(), ih = inst.content_hash();
  // Only complete sets are saved: the cache format cannot mark a set as
  // partial, and a partial set silently poisons later projections.
  if (r.complete) {
    if (!a.out.empty()) {
      r.states.save(a.out, sh, ih);
      std::cout << "saved: " << a.out << "\n";
    }
    if (!a.cache.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(a.cache, ec);
      if (!ec) {
        std::string path = reach_cache_path(a.cache, sh, ih);
        r.states.save(path, sh, ih);
        std::cout << "cache: " << path << "\n";
      }
    }
  } else if (!a.out.empty() || !a.cache.empty()) {
    std::cerr << "note: exploration incomplete; nothing was saved\n";
  }

  ordered_json m = base_manifest("reach", started);
  m["inputs"] = ordered_json{{"spec", a.spec}, {"instance", a.instance}};
  m["spec_hash"] = hash_hex(sh);
  m["instance_hash"] = hash_hex(ih);
  m["config"] =
      ordered_json{{"mode", a.mode}, {"budget", a.budget}, {"timeout_s", a.timeout_s}};
  m["states"] = r.states.size();
  m["transitions"] = r.transitions;
  m["depth"] = r.depth;
  m["complete"] = r.complete;
  m["total_seconds"] = seconds_since(t0);
  emit_manifest(a.manifest, m);

  if (a.mode == "exhaustive" && !r.complete) {
    std::cerr << "error: the exploration budget ran out before the frontier emptied\n";
    return 2;
  }
  return 0;
}

struct SliceArgs {
  std::string spec, lemma;
  std::string grammar, instance, cache, manifest;
};

int cmd_slice(const SliceArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  std::string started = now_utc();
  TransitionSystem sys = parse_spec(read_file(a.spec), a.spec);
  const LemmaDecl* lemma = sys.lemma(a.lemma);
  if (!lemma) throw std::runtime_error("protocol declares no lemma named '" + a.lemma + "'");

  Grammar g;
  bool have_grammar = !a.grammar.empty();
  if (have_grammar) g = parse_grammar(read_file(a.grammar), sys, a.grammar);

  std::optional<Instance> inst;
  std::optional<StateSet> full;
  std::optional<ProjectionCache> proj;
  if (!a.instance.empty()) {
    inst = parse_instance(read_file(a.instance), sys, a.instance);
    full = load_or_compute_reach(sys, *inst, a.cache);
    proj.emplace(sys, *full, sys.content_hash(), inst->content_hash(), a.cache);
  }

  std::cout << "lemma " << a.lemma << "\n";
  std::vector<uint32_t> lvars_up, lvars_pr;
  collect_vars(*lemma->body, lvars_up, lvars_pr);
  for (uint32_t ai = 0; ai < sys.actions.size(); ++ai) {
    std::vector<uint32_t> slice = variable_slice(sys, lemma->body, ai);
    std::cout << "  " << sys.actions[ai].name << ": ";
    bool writes = false;
    for (uint32_t v : lvars_up)
      if (sys.actions[ai].writes(v)) writes = true;
    for (size_t i = 0; i < slice.size(); ++i)
      std::cout << (i ? "," : "") << sys.vars[slice[i]].name;
    if (!writes) std::cout << "  (action cannot change the lemma)";
    if (have_grammar) {
      std::vector<uint32_t> kept = grammar_slice(g, slice);
      std::cout << "  preds " << kept.size() << "/" << g.preds.size();
    }
    if (proj) {
      const StateSet& pr = proj->project(slice);
      std::cout << "  proj " << pr.size() << "/" << full->size();
      if (pr.size() > 0)
        std::cout << " (" << (full->size() / pr.size()) << "x)";
    }
    std::cout << "\n";
  }

  ordered_json m = base_manifest("slice", started);
  m["inputs"] = ordered_json{
      {"spec", a.spec}, {"grammar", a.grammar}, {"instance", a.instance}};
  m["spec_hash"] = hash_hex(sys.content_hash());
  m["lemma"] = a.lemma;
  m["total_seconds"] = seconds_since(t0);
  emit_manifest(a.manifest, m);
  return 0;
}

struct CheckArgs {
  std::string spec, instance, graph, manifest;
  std::string mode = "auto";
  bool force = false;
  CheckOptions opts;
};

int cmd_check(CheckArgs a) {
  auto t0 = std::chrono::steady_clock::now();
  std::string started = now_utc();
  TransitionSystem sys = parse_spec(read_file(a.spec), a.spec);
  Instance inst = parse_instance(read_file(a.instance), sys, a.instance);
  ProofGraph graph =
      graph_from_json(read_file(a.graph), sys, a.graph, /*enforce_spec_hash=*/false);
  a.opts.exhaustive_threshold = apply_mode(a.mode, a.opts.exhaustive_threshold);

  bool spec_ok = graph.meta.spec_hash == sys.content_hash();
  bool inst_ok = graph.meta.instance_hash == inst.content_hash();
  if (!spec_ok || !inst_ok) {
    std::string what = !spec_ok ? "protocol definition" : "instance";
    if (!a.force) {
      std::cerr << "error: the graph was produced from a different " << what
                << " (hash mismatch); pass --force to re-verify anyway\n";
      return 1;
    }
    std::cerr << "note: " << what << " hash mismatch overridden by --force; "
              << "re-verifying from scratch\n";
  }

  CheckResult res = check_graph(sys, inst, graph, a.opts);
  for (const std::string& v : res.verdicts) std::cout << v << "\n";
  for (const std::string& p : res.problems) std::cout << "problem: " << p << "\n";

  ordered_json m = base_manifest("check", started);
  m["inputs"] = ordered_json{
      {"spec", a.spec}, {"instance", a.instance}, {"graph", a.graph}};
  m["spec_hash"] = hash_hex(sys.content_hash());
  m["instance_hash"] = hash_hex(inst.content_hash());
  m["config"] = ordered_json{{"seed", a.opts.seed},
                             {"attempts", a.opts.attempts},
                             {"exhaustive_threshold", a.opts.exhaustive_threshold},
                             {"workers", a.opts.workers}};
  m["valid"] = res.valid;
  m["exhaustive"] = res.exhaustive;
  m["problems"] = res.problems.size();
  m["total_seconds"] = seconds_since(t0);
  emit_manifest(a.manifest, m);

  if (!res.valid) {
    std::cout << "check: INVALID (" << res.problems.size() << " problem(s))\n";
    return 4;
  }
  std::cout << "check: valid (" << graph.nodes.size() << " lemma(s), "
            << (res.exhaustive ? "exhaustive" : "sampled") << ")\n";
  return 0;
}

struct ExportDotArgs {
  std::string spec, graph, out, manifest;
};

int cmd_export_dot(const ExportDotArgs& a) {
  auto t0 = std::chrono::steady_clock::now();
  std::string started = now_utc();
  TransitionSystem sys = parse_spec(read_file(a.spec), a.spec);
  ProofGraph graph = graph_from_json(read_file(a.graph), sys, a.graph);
  std::string dot = graph_to_dot(graph, sys);
  if (!a.out.empty()) {
    write_file(a.out, dot);
    std::cout << "dot: " << a.out << "\n";
  } else {
    std::cout << dot;
  }

  ordered_json m = base_manifest("export-dot", started);
  m["inputs"] = ordered_json{{"spec", a.spec}, {"graph", a.graph}};
  m["spec_hash"] = hash_hex(sys.content_hash());
  m["total_seconds"] = seconds_since(t0);
  emit_manifest(a.manifest, m);
  return 0;
}

void add_config_options(CLI::App* cmd, InferenceConfig& cfg) {
  cmd->add_option("--ninvs,--n-invs", cfg.n_invs, "candidate pool size per round");
  cmd->add_option("--nctis,--n-ctis", cfg.n_ctis, "counterexample cap per obligation");
  cmd->add_option("--maxliterals,--max-literals", cfg.max_literals,
                  "max literals per candidate clause");
  cmd->add_option("--max-rounds", cfg.max_rounds, "candidate sampling rounds per obligation");
  cmd->add_option("--seed", cfg.seed, "random seed");
  cmd->add_option("--workers", cfg.workers, "worker threads (0 = all cores)");
  cmd->add_option("--node-timeout", cfg.node_timeout_s,
                  "per-obligation timeout, seconds (0 = give up immediately)");
  cmd->add_option("--global-timeout", cfg.global_timeout_s,
                  "whole-run timeout, seconds (0 = give up immediately)");
  cmd->add_option("--exhaustive-threshold", cfg.exhaustive_threshold,
                  "exhaustive counterexample search up to this many type states");
  cmd->add_option("--cti-attempts-factor", cfg.cti_attempts_factor,
                  "sampled counterexample attempts per requested counterexample");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inductive invariant inference via proof slicing, over finite protocol instances"};
  app.require_subcommand(1);

  InferArgs infer;
  CLI::App* c_infer = app.add_subcommand("infer", "infer an inductive proof graph for a lemma");
  c_infer->add_option("spec", infer.spec, "protocol definition (.gap)")->required();
  c_infer->add_option("instance", infer.instance, "finite instance (.inst)")->required();
  c_infer->add_option("grammar", infer.grammar, "synthesis grammar (.grm)")->required();
  c_infer->add_option("safety", infer.lemma, "root safety lemma name")->required();
  c_infer->add_option("-o,--out", infer.out, "write the proof graph JSON here");
  c_infer->add_option("--manifest", infer.manifest, "write the run manifest JSON here");
  c_infer->add_option("--dot", infer.dot, "write a Graphviz rendering here");
  c_infer->add_option("--cache-dir,--cache", infer.cache,
                      "cache directory for reachable sets and projections");
  c_infer->add_option("--mode", infer.mode, "counterexample search strategy")
      ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
  add_config_options(c_infer, infer.cfg);

  ReachArgs reach;
  CLI::App* c_reach = app.add_subcommand("reach", "enumerate the reachable states");
  c_reach->add_option("spec", reach.spec, "protocol definition (.gap)")->required();
  c_reach->add_option("instance", reach.instance, "finite instance (.inst)")->required();
  c_reach->add_option("-o,--out", reach.out, "save the reachable set here");
  c_reach->add_option("--cache-dir,--cache", reach.cache, "cache directory to save into");
  c_reach->add_option("--mode", reach.mode,
                      "exhaustive: the budget must cover the frontier; sampled: "
                      "stop quietly at the budget")
      ->check(CLI::IsMember({"exhaustive", "sampled"}));
  c_reach->add_option("--budget,--max-states", reach.budget,
                      "stop after this many states (0 = unlimited)");
  c_reach->add_option("--timeout", reach.timeout_s, "stop after this many seconds");
  c_reach->add_option("--manifest", reach.manifest, "write the run manifest JSON here");

  SliceArgs slice;
  CLI::App* c_slice = app.add_subcommand("slice", "show the per-action slices of a lemma");
  c_slice->add_option("spec", slice.spec, "protocol definition (.gap)")->required();
  c_slice->add_option("--lemma", slice.lemma, "lemma name")->required();
  c_slice->add_option("--grammar", slice.grammar, "synthesis grammar (.grm)");
  c_slice->add_option("--instance", slice.instance, "finite instance (.inst)");
  c_slice->add_option("--cache-dir,--cache", slice.cache, "cache directory");
  c_slice->add_option("--manifest", slice.manifest, "write the run manifest JSON here");

  CheckArgs check;
  CLI::App* c_check = app.add_subcommand("check", "re-verify a proof graph from scratch");
  c_check->add_option("spec", check.spec, "protocol definition (.gap)")->required();
  c_check->add_option("instance", check.instance, "finite instance (.inst)")->required();
  c_check->add_option("graph", check.graph, "proof graph JSON")->required();
  c_check->add_flag("--force", check.force,
                    "re-verify even when the graph's spec/instance hashes differ");
  c_check->add_option("--seed", check.opts.seed, "random seed for sampled checks");
  c_check->add_option("--attempts", check.opts.attempts, "sampled pre-states per obligation");
  c_check->add_option("--exhaustive-threshold", check.opts.exhaustive_threshold,
                      "exhaustive search up to this many type states");
  c_check->add_option("--mode", check.mode, "counterexample search strategy")
      ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}));
  c_check->add_option("--workers", check.opts.workers, "worker threads (0 = all cores)");
  c_check->add_option("--manifest", check.manifest, "write the run manifest JSON here");

  ExportDotArgs dot;
  CLI::App* c_dot = app.add_subcommand("export-dot", "render a proof graph to Graphviz");
  c_dot->add_option("spec", dot.spec, "protocol definition (.gap)")->required();
  c_dot->add_option("graph", dot.graph, "proof graph JSON")->required();
  c_dot->add_option("-o,--out", dot.out, "output file (default: stdout)");
  c_dot->add_option("--manifest", dot.manifest, "write the run manifest JSON here");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand(c_infer)) return cmd_infer(infer);
    if (app.got_subcommand(c_reach)) return cmd_reach(reach);
    if (app.got_subcommand(c_slice)) return cmd_slice(slice);
    if (app.got_subcommand(c_check)) return cmd_check(check);
    if (app.got_subcommand(c_dot)) return cmd_export_dot(dot);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const CacheError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
