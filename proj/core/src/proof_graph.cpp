// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/proof_graph.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

#include "gapslice/cti.hpp"
#include "gapslice/eval.hpp"
#include "gapslice/parser.hpp"
#include "gapslice/slicing.hpp"
#include "gapslice/util/hash.hpp"
#include "gapslice/util/parallel.hpp"

namespace gapslice {

using ordered_json = nlohmann::ordered_json;

const char* to_string(ObligationStatus s) {
  switch (s) {
    case ObligationStatus::Unknown: return "unknown";
    case ObligationStatus::SelfInductive: return "self_inductive";
    case ObligationStatus::Valid: return "valid";
    case ObligationStatus::Failed: return "failed";
  }
  return "unknown";
}

namespace {

ObligationStatus status_from_string(const std::string& s) {
  if (s == "unknown") return ObligationStatus::Unknown;
  if (s == "self_inductive") return ObligationStatus::SelfInductive;
  if (s == "valid") return ObligationStatus::Valid;
  if (s == "failed") return ObligationStatus::Failed;
  throw std::runtime_error("unknown obligation status '" + s + "'");
}

/// State variables the lemma reads (pre or post state).
std::vector<uint32_t> lemma_vars(const Expr& body) {
  std::vector<uint32_t> unprimed, primed;
  collect_vars(*body, unprimed, primed);
  for (uint32_t v : primed) unprimed.push_back(v);
  std::sort(unprimed.begin(), unprimed.end());
  unprimed.erase(std::unique(unprimed.begin(), unprimed.end()), unprimed.end());
  return unprimed;
}

bool writes_any(const ActionDecl& a, const std::vector<uint32_t>& vars) {
  for (uint32_t v : vars)
    if (a.writes(v)) return true;
  return false;
}

/// Creates a lemma node with one obligation per action, discharging the
/// obligations whose action cannot change the lemma.
LemmaNode make_node(const TransitionSystem& sys, std::string name, Expr body,
                    uint32_t depth) {
  LemmaNode n;
  n.name = std::move(name);
  n.body = std::move(body);
  n.depth = depth;
  std::vector<uint32_t> vars = lemma_vars(n.body);
  n.actions.resize(sys.actions.size());
  for (uint32_t a = 0; a < sys.actions.size(); ++a) {
    n.actions[a].action = a;
    if (!writes_any(sys.actions[a], vars))
      n.actions[a].status = ObligationStatus::SelfInductive;
  }
  return n;
}

std::string join_names(const TransitionSystem& sys, const std::vector<uint32_t>& vars) {
  std::string out;
  for (size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += sys.vars[vars[i]].name;
  }
  return out;
}

/// Truth vector of a lemma body over the full type-correct state
/// enumeration; exact semantic identity on instances small enough to
/// enumerate. Bit i is the body's value on the i-th enumerated state.
std::vector<uint64_t> truth_vector(const TransitionSystem& sys, const Instance& inst,
                                   const Expr& body) {
  std::vector<uint64_t> bits;
  Env env(sys, inst);
  uint64_t i = 0;
  for_each_type_state(sys, inst, [&](const State& s) {
    env.pre = StateView::of(s);
    if (i % 64 == 0) bits.push_back(0);
    if (eval_bool(body, env)) bits.back() |= uint64_t(1) << (i % 64);
    ++i;
    return true;
  });
  return bits;
}

Deadline deadline_after(std::chrono::steady_clock::time_point from, double seconds) {
  if (seconds >= 1e9) return kNoDeadline;  // effectively unbounded
  return from + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                    std::chrono::duration<double>(seconds));
}

}  // namespace

int32_t ProofGraph::find(const std::string& name) const {
  for (size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return int32_t(i);
  return -1;
}

bool ProofGraph::all_discharged() const {
  for (const LemmaNode& n : nodes)
    for (const ActionNode& a : n.actions)
      if (a.status != ObligationStatus::Valid &&
          a.status != ObligationStatus::SelfInductive)
        return false;
  return true;
}

std::vector<std::pair<std::string, std::string>> ProofGraph::failed_obligations(
    const TransitionSystem& sys) const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const LemmaNode& n : nodes)
    for (const ActionNode& a : n.actions)
      if (a.status == ObligationStatus::Failed)
        out.emplace_back(n.name, sys.actions[a.action].name);
  return out;
}

Expr ProofGraph::invariant() const {
  if (!all_discharged())
    throw std::logic_error("refusing to extract an invariant from an invalid proof graph");
  if (nodes.size() == 1) return nodes[0].body;
  Expr conj = make_expr(ExprNode::Op::And, nodes[0].body->span);
  for (const LemmaNode& n : nodes) conj->children.push_back(n.body);
  conj->type = Type::boolean();
  return conj;
}

std::string format_iteration(const ObligationRecord& rec, uint32_t depth) {
  std::ostringstream os;
  os << "obligation lemma=" << rec.lemma << " action=" << rec.action
     << " depth=" << depth << " status=" << to_string(rec.status)
     << " slice=" << rec.inference.slice.size() << "v/" << rec.inference.sliced_preds
     << "p proj=" << rec.inference.proj_states
     << " ctis=" << rec.inference.ctis_initial << "/" << rec.inference.ctis_eliminated
     << "/" << rec.inference.ctis_remaining
     << " pool=" << rec.inference.pool_generated << "/" << rec.inference.pool_distinct
     << "/" << rec.inference.pool_invariants
     << " rounds=" << rec.inference.rounds << " new=";
  if (rec.new_lemmas.empty()) {
    os << "-";
  } else {
    for (size_t i = 0; i < rec.new_lemmas.size(); ++i) {
      if (i) os << ",";
      os << rec.new_lemmas[i];
    }
  }
  os << " time=" << std::fixed << std::setprecision(2) << rec.seconds << "s";
  if (!rec.inference.failure.empty()) os << " reason=\"" << rec.inference.failure << "\"";
  return os.str();
}

RunResult run_inference(const TransitionSystem& sys, const Instance& inst,
                        const Grammar& g, const std::string& root_name,
                        uint64_t full_states, ProjectionCache& proj,
                        const InferenceConfig& cfg, std::ostream* log) {
  const LemmaDecl* root = sys.lemma(root_name);
  if (!root) throw std::runtime_error("protocol declares no lemma named '" + root_name + "'");

  RunResult run;
  ProofGraph& graph = run.graph;
  graph.meta.protocol = sys.name;
  graph.meta.spec_hash = sys.content_hash();
  graph.meta.instance_hash = inst.content_hash();
  graph.meta.root = root_name;
  graph.meta.seed = cfg.seed;
  graph.meta.full_states = full_states;
  graph.meta.config = cfg;

  auto t_start = std::chrono::steady_clock::now();
  auto elapsed = [&](std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
  };
  Deadline global_deadline = deadline_after(t_start, cfg.global_timeout_s);

  graph.nodes.push_back(make_node(sys, root_name, root->body, 0));
  std::unordered_map<std::string, uint32_t> by_body;
  by_body.emplace(expr_to_string(graph.nodes[0].body), 0);

  // Support-lemma dedup. Canonical rendering catches syntactic repeats;
  // on instances small enough to enumerate, a truth vector over the whole
  // type-correct space catches semantic repeats exactly. Vectors are
  // computed lazily, once per node.
  const uint64_t type_space = type_state_space_size(sys, inst);
  const bool semantic_dedup = type_space > 0 && type_space <= cfg.exhaustive_threshold;
  std::vector<std::vector<uint64_t>> truths;
  auto node_truth = [&](uint32_t id) -> const std::vector<uint64_t>& {
    if (truths.size() < graph.nodes.size()) truths.resize(graph.nodes.size());
    if (truths[id].empty()) truths[id] = truth_vector(sys, inst, graph.nodes[id].body);
    return truths[id];
  };

  // The safety property must hold initially; otherwise there is nothing to
  // prove inductive.
  if (!holds_on_init(sys, inst, graph.nodes[0].body)) {
    run.total_seconds = elapsed(t_start);
    if (log) *log << "initiation lemma=" << root_name << " status=violated" << std::endl;
    return run;
  }

  uint32_t synth_counter = 0;
  auto fresh_name = [&] {
    std::string name;
    do {
      name = "L" + std::to_string(++synth_counter);
    } while (graph.find(name) >= 0 || sys.lemma(name) != nullptr);
    return name;
  };

  // Records the lemmas an obligation synthesized as support edges, adding
  // new nodes for bodies the graph has not seen. Runs on failure too: a
  // failed obligation keeps its partial support, and the proven subgraphs
  // beneath it still certify their own lemmas. A lemma equal to the
  // obligation's own target is dropped -- the target already sits in the
  // induction antecedent, so a self-edge could never add information.
  auto link_supports = [&](uint32_t lm, uint32_t ac, const std::vector<Expr>& lemmas,
                           ObligationRecord& rec) {
    const uint32_t parent_depth = graph.nodes[lm].depth;
    const std::string self_canon = expr_to_string(graph.nodes[lm].body);
    for (const Expr& lemma : lemmas) {
      std::string canon = expr_to_string(lemma);
      if (canon == self_canon) continue;
      int64_t id = -1;
      if (auto it = by_body.find(canon); it != by_body.end()) {
        id = int64_t(it->second);
      } else {
        std::vector<uint64_t> tv;
        if (semantic_dedup) {
          tv = truth_vector(sys, inst, lemma);
          for (uint32_t n = 0; n < graph.nodes.size(); ++n) {
            if (tv == node_truth(n)) {
              id = int64_t(n);
              break;
            }
          }
        }
        if (id == int64_t(lm)) continue;  // semantically the target itself
        if (id < 0) {
          id = int64_t(graph.nodes.size());
          graph.nodes.push_back(make_node(sys, fresh_name(), lemma, parent_depth + 1));
          by_body.emplace(std::move(canon), uint32_t(id));
          if (semantic_dedup) {
            truths.resize(graph.nodes.size());
            truths[size_t(id)] = std::move(tv);
          }
        }
      }
      ActionNode& cur = graph.nodes[lm].actions[ac];
      if (std::find(cur.supports.begin(), cur.supports.end(), uint32_t(id)) ==
          cur.supports.end())
        cur.supports.push_back(uint32_t(id));
      rec.new_lemmas.push_back(graph.nodes[size_t(id)].name);
    }
  };

  while (true) {
    // Pick the open obligation with the smallest (depth, action, creation)
    // key. Self-inductive and failed obligations stay out of the loop.
    int32_t pick_l = -1;
    uint32_t pick_a = 0;
    for (uint32_t l = 0; l < graph.nodes.size(); ++l) {
      for (uint32_t a = 0; a < graph.nodes[l].actions.size(); ++a) {
        if (graph.nodes[l].actions[a].status != ObligationStatus::Unknown) continue;
        if (pick_l < 0 ||
            std::tuple(graph.nodes[l].depth, a, l) <
                std::tuple(graph.nodes[pick_l].depth, pick_a, uint32_t(pick_l))) {
          pick_l = int32_t(l);
          pick_a = a;
        }
      }
    }
    if (pick_l < 0) break;
    if (std::chrono::steady_clock::now() >= global_deadline) {
      run.timed_out = true;
      break;
    }

    LemmaNode& node = graph.nodes[pick_l];
    ActionNode& act = node.actions[pick_a];
    const std::string& action_name = sys.actions[pick_a].name;

    std::vector<Expr> support;
    support.reserve(act.supports.size());
    for (uint32_t s : act.supports) support.push_back(graph.nodes[s].body);

    uint64_t obligation_seed =
        derive_stream(cfg.seed, fnv1a64(node.name + '\0' + action_name));
    Deadline node_deadline =
        deadline_after(std::chrono::steady_clock::now(), cfg.node_timeout_s);

    auto t_node = std::chrono::steady_clock::now();
    LocalInferenceResult inf =
        local_inv_inference(sys, inst, g, support, node.body, pick_a, proj, cfg,
                            obligation_seed, std::min(node_deadline, global_deadline));

    ObligationRecord rec;
    rec.lemma = node.name;
    rec.action = action_name;
    rec.seconds = elapsed(t_node);

    act.slice = inf.slice;
    act.sliced_preds = inf.sliced_preds;
    act.proj_states = inf.proj_states;
    act.pool_generated = inf.pool_generated;
    act.pool_distinct = inf.pool_distinct;
    act.pool_invariants = inf.pool_invariants;
    act.ctis_initial = inf.ctis_initial;
    act.ctis_eliminated = inf.ctis_eliminated;
    act.ctis_remaining = inf.ctis_remaining;
    act.rounds = inf.rounds;
    act.exhaustive_pool = inf.exhaustive_pool;
    act.exhaustive_cti = inf.exhaustive_cti;
    act.sample_ctis = inf.sample_ctis;

    if (inf.success) {
      act.status = ObligationStatus::Valid;
    } else {
      act.status = ObligationStatus::Failed;
      act.failure = inf.failure;
    }
    // link_supports may grow graph.nodes and invalidate `node`/`act`; only
    // indexed access from here on.
    link_supports(uint32_t(pick_l), pick_a, inf.new_support, rec);

    rec.status = graph.nodes[pick_l].actions[pick_a].status;
    rec.inference = std::move(inf);
    if (log) *log << format_iteration(rec, graph.nodes[pick_l].depth) << std::endl;
    run.iterations.push_back(std::move(rec));
  }

  if (run.timed_out) {
    // A timed-out run still rounds off to a well-formed partial graph:
    // whatever was never attempted is recorded as failed.
    for (LemmaNode& n : graph.nodes)
      for (ActionNode& a : n.actions)
        if (a.status == ObligationStatus::Unknown) {
          a.status = ObligationStatus::Failed;
          a.failure = "global timeout";
        }
  }

  run.initiation = true;
  for (const LemmaNode& n : graph.nodes) {
    if (!holds_on_init(sys, inst, n.body)) {
      run.initiation = false;
      if (log) *log << "initiation lemma=" << n.name << " status=violated" << std::endl;
    }
  }
  run.success = !run.timed_out && run.initiation && graph.all_discharged();
  run.total_seconds = elapsed(t_start);
  return run;
}

CheckResult check_graph(const TransitionSystem& sys, const Instance& inst,
                        const ProofGraph& graph, const CheckOptions& opts) {
  CheckResult res;
  res.exhaustive = true;
  CtiOptions copt;
  copt.n_ctis = std::max<uint64_t>(opts.n_ctis, 1);
  copt.attempts = opts.attempts;
  copt.exhaustive_threshold = opts.exhaustive_threshold;
  copt.workers = opts.workers;

  for (const LemmaNode& n : graph.nodes) {
    bool init_ok = holds_on_init(sys, inst, n.body);
    res.verdicts.push_back("lemma " + n.name + " initiation " +
                           (init_ok ? "ok" : "VIOLATED"));
    if (!init_ok)
      res.problems.push_back("lemma " + n.name + " does not hold initially");
    std::vector<uint32_t> vars = lemma_vars(n.body);
    for (const ActionNode& a : n.actions) {
      const std::string& action_name = sys.actions[a.action].name;
      std::string head = "obligation (" + n.name + ", " + action_name + ")";
      switch (a.status) {
        case ObligationStatus::Unknown:
          res.verdicts.push_back(head + " OPEN");
          res.problems.push_back(head + " was never discharged");
          break;
        case ObligationStatus::Failed:
          res.verdicts.push_back(head + " FAILED (recorded)");
          res.problems.push_back(head + " is recorded as failed");
          break;
        case ObligationStatus::SelfInductive:
          if (writes_any(sys.actions[a.action], vars)) {
            res.verdicts.push_back(head + " STALE self-inductive claim");
            res.problems.push_back(head +
                                   " is marked self-inductive but the action writes "
                                   "variables the lemma reads");
          } else {
            res.verdicts.push_back(head + " ok (self-inductive)");
          }
          break;
        case ObligationStatus::Valid: {
          std::vector<Expr> support;
          support.reserve(a.supports.size());
          for (uint32_t s : a.supports) {
            if (s >= graph.nodes.size())
              throw std::runtime_error("support id out of range in graph");
            support.push_back(graph.nodes[s].body);
          }
          copt.seed = derive_stream(opts.seed, fnv1a64(n.name + '\0' + action_name));
          CtiResult r = generate_ctis(sys, inst, support, n.body, a.action, copt);
          if (!r.exhaustive) res.exhaustive = false;
          if (!r.ctis.empty()) {
            res.verdicts.push_back(head + " REFUTED (counterexample found)");
            res.problems.push_back(head + " is not locally valid: counterexample found");
          } else {
            res.verdicts.push_back(head + std::string(" ok (") +
                                   (r.exhaustive ? "exhaustive" : "sampled") + ")");
          }
          break;
        }
      }
    }
  }
  res.valid = res.problems.empty();
  return res;
}

// ---------------------------------------------------------------------------
// Serialization

std::string graph_to_json(const ProofGraph& graph, const TransitionSystem& sys) {
  ordered_json j;
  j["format"] = "gapslice-graph-v1";
  j["protocol"] = graph.meta.protocol;
  j["spec_hash"] = hash_hex(graph.meta.spec_hash);
  j["instance_hash"] = hash_hex(graph.meta.instance_hash);
  j["root"] = graph.meta.root;
  j["seed"] = graph.meta.seed;
  j["full_states"] = graph.meta.full_states;
  {
    // Configuration echo. `workers` is deliberately absent: the graph file
    // must be byte-identical for any worker count (it lives in the run
    // manifest instead).
    const InferenceConfig& c = graph.meta.config;
    ordered_json cj;
    cj["n_invs"] = c.n_invs;
    cj["n_ctis"] = c.n_ctis;
    cj["max_literals"] = c.max_literals;
    cj["max_rounds"] = c.max_rounds;
    cj["node_timeout_s"] = c.node_timeout_s;
    cj["global_timeout_s"] = c.global_timeout_s;
    cj["exhaustive_threshold"] = c.exhaustive_threshold;
    cj["cti_attempts_factor"] = c.cti_attempts_factor;
    j["config"] = std::move(cj);
  }
  ordered_json lemmas = ordered_json::array();
  for (const LemmaNode& n : graph.nodes) {
    ordered_json ln;
    ln["name"] = n.name;
    ln["body"] = expr_to_string(n.body);
    ln["depth"] = n.depth;
    ordered_json actions = ordered_json::array();
    for (const ActionNode& a : n.actions) {
      ordered_json an;
      an["action"] = sys.actions[a.action].name;
      an["status"] = to_string(a.status);
      ordered_json supports = ordered_json::array();
      for (uint32_t s : a.supports) supports.push_back(graph.nodes[s].name);
      an["supports"] = std::move(supports);
      ordered_json slice = ordered_json::array();
      for (uint32_t v : a.slice) slice.push_back(sys.vars[v].name);
      an["slice"] = std::move(slice);
      an["sliced_preds"] = a.sliced_preds;
      an["proj_states"] = a.proj_states;
      an["pool_generated"] = a.pool_generated;
      an["pool_distinct"] = a.pool_distinct;
      an["pool_invariants"] = a.pool_invariants;
      an["ctis_initial"] = a.ctis_initial;
      an["ctis_eliminated"] = a.ctis_eliminated;
      an["ctis_remaining"] = a.ctis_remaining;
      an["rounds"] = a.rounds;
      an["exhaustive_pool"] = a.exhaustive_pool;
      an["exhaustive_cti"] = a.exhaustive_cti;
      if (!a.failure.empty()) an["failure"] = a.failure;
      if (!a.sample_ctis.empty()) {
        ordered_json sc = ordered_json::array();
        for (const std::string& s : a.sample_ctis) sc.push_back(s);
        an["sample_ctis"] = std::move(sc);
      }
      actions.push_back(std::move(an));
    }
    ln["actions"] = std::move(actions);
    lemmas.push_back(std::move(ln));
  }
  j["lemmas"] = std::move(lemmas);
  ordered_json failed = ordered_json::array();
  for (const auto& [lemma, action] : graph.failed_obligations(sys)) {
    ordered_json f;
    f["lemma"] = lemma;
    f["action"] = action;
    failed.push_back(std::move(f));
  }
  j["failed"] = std::move(failed);
  return j.dump(2) + "\n";
}

ProofGraph graph_from_json(const std::string& text, const TransitionSystem& sys,
                           const std::string& filename, bool enforce_spec_hash) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw std::runtime_error(filename + ": not valid JSON: " + e.what());
  }
  auto fail = [&](const std::string& msg) -> std::runtime_error {
    return std::runtime_error(filename + ": " + msg);
  };
  if (!j.is_object() || j.value("format", "") != std::string("gapslice-graph-v1"))
    throw fail("not a gapslice-graph-v1 file");
  ProofGraph graph;
  graph.meta.protocol = j.at("protocol").get<std::string>();
  if (graph.meta.protocol != sys.name)
    throw fail("graph is for protocol '" + graph.meta.protocol + "', not '" + sys.name + "'");
  graph.meta.spec_hash = std::stoull(j.at("spec_hash").get<std::string>(), nullptr, 16);
  if (enforce_spec_hash && graph.meta.spec_hash != sys.content_hash())
    throw fail("graph was produced from a different version of the protocol definition");
  graph.meta.instance_hash =
      std::stoull(j.at("instance_hash").get<std::string>(), nullptr, 16);
  graph.meta.root = j.at("root").get<std::string>();
  graph.meta.seed = j.at("seed").get<uint64_t>();
  graph.meta.full_states = j.at("full_states").get<uint64_t>();
  {
    const ordered_json& cj = j.at("config");
    InferenceConfig& c = graph.meta.config;
    c.n_invs = cj.at("n_invs").get<uint64_t>();
    c.n_ctis = cj.at("n_ctis").get<uint64_t>();
    c.max_literals = cj.at("max_literals").get<uint32_t>();
    c.max_rounds = cj.at("max_rounds").get<uint32_t>();
    c.node_timeout_s = cj.at("node_timeout_s").get<double>();
    c.global_timeout_s = cj.at("global_timeout_s").get<double>();
    c.exhaustive_threshold = cj.at("exhaustive_threshold").get<uint64_t>();
    c.cti_attempts_factor = cj.at("cti_attempts_factor").get<uint64_t>();
    c.seed = graph.meta.seed;
  }

  const ordered_json& lemmas = j.at("lemmas");
  if (!lemmas.is_array() || lemmas.empty()) throw fail("graph has no lemmas");
  std::unordered_map<std::string, uint32_t> by_name;
  for (const auto& ln : lemmas) {
    LemmaNode n;
    n.name = ln.at("name").get<std::string>();
    if (by_name.count(n.name)) throw fail("duplicate lemma '" + n.name + "'");
    n.body = parse_lemma_body(ln.at("body").get<std::string>(), sys, filename);
    n.depth = ln.at("depth").get<uint32_t>();
    by_name.emplace(n.name, uint32_t(graph.nodes.size()));
    graph.nodes.push_back(std::move(n));
  }
  if (graph.nodes[0].name != graph.meta.root) throw fail("the first lemma must be the root");

  size_t node_ix = 0;
  for (const auto& ln : lemmas) {
    LemmaNode& n = graph.nodes[node_ix++];
    const ordered_json& actions = ln.at("actions");
    if (actions.size() != sys.actions.size())
      throw fail("lemma '" + n.name + "' must list one obligation per action");
    n.actions.resize(sys.actions.size());
    for (size_t i = 0; i < actions.size(); ++i) {
      const auto& an = actions[i];
      ActionNode& a = n.actions[i];
      std::string action_name = an.at("action").get<std::string>();
      auto ai = sys.action_index(action_name);
      if (!ai) throw fail("unknown action '" + action_name + "'");
      if (*ai != i) throw fail("obligations of '" + n.name + "' are out of order");
      a.action = *ai;
      a.status = status_from_string(an.at("status").get<std::string>());
      for (const auto& s : an.at("supports")) {
        auto it = by_name.find(s.get<std::string>());
        if (it == by_name.end())
          throw fail("support '" + s.get<std::string>() + "' names no lemma");
        a.supports.push_back(it->second);
      }
      for (const auto& v : an.at("slice")) {
        auto vi = sys.var_index(v.get<std::string>());
        if (!vi) throw fail("slice names unknown variable '" + v.get<std::string>() + "'");
        a.slice.push_back(*vi);
      }
      a.sliced_preds = an.at("sliced_preds").get<uint32_t>();
      a.proj_states = an.at("proj_states").get<uint64_t>();
      a.pool_generated = an.at("pool_generated").get<uint64_t>();
      a.pool_distinct = an.at("pool_distinct").get<uint64_t>();
      a.pool_invariants = an.at("pool_invariants").get<uint64_t>();
      a.ctis_initial = an.at("ctis_initial").get<uint64_t>();
      a.ctis_eliminated = an.at("ctis_eliminated").get<uint64_t>();
      a.ctis_remaining = an.at("ctis_remaining").get<uint64_t>();
      a.rounds = an.at("rounds").get<uint32_t>();
      a.exhaustive_pool = an.at("exhaustive_pool").get<bool>();
      a.exhaustive_cti = an.at("exhaustive_cti").get<bool>();
      if (an.contains("failure")) a.failure = an.at("failure").get<std::string>();
      if (an.contains("sample_ctis"))
        for (const auto& s : an.at("sample_ctis"))
          a.sample_ctis.push_back(s.get<std::string>());
    }
  }

  // The failed list is derivable from the statuses; require it to agree so
  // a hand-edited file cannot tell two stories.
  auto derived = graph.failed_obligations(sys);
  const ordered_json& failed = j.at("failed");
  if (failed.size() != derived.size()) throw fail("failed list disagrees with statuses");
  for (size_t i = 0; i < derived.size(); ++i) {
    if (failed[i].at("lemma").get<std::string>() != derived[i].first ||
        failed[i].at("action").get<std::string>() != derived[i].second)
      throw fail("failed list disagrees with statuses");
  }
  return graph;
}

// ---------------------------------------------------------------------------
// Rendering

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string reduction_label(uint64_t full, uint64_t proj) {
  if (full == 0 || proj == 0) return "";
  return std::to_string(full / proj) + "x";
}

}  // namespace

std::string graph_to_dot(const ProofGraph& graph, const TransitionSystem& sys) {
  std::ostringstream os;
  os << "digraph proof {\n";
  os << "  rankdir=TB;\n";
  os << "  node [fontname=\"Helvetica\"];\n";
  os << "  edge [fontname=\"Helvetica\", fontsize=10];\n";
  for (const LemmaNode& n : graph.nodes) {
    os << "  \"" << dot_escape(n.name) << "\" [shape=ellipse, tooltip=\""
       << dot_escape(expr_to_string(n.body)) << "\"];\n";
  }
  for (const LemmaNode& n : graph.nodes) {
    for (const ActionNode& a : n.actions) {
      if (a.status == ObligationStatus::SelfInductive) continue;
      std::string id = n.name + "/" + sys.actions[a.action].name;
      std::string label = sys.actions[a.action].name;
      if (!a.slice.empty()) {
        label += "\\nslice: ";
        std::string vars = join_names(sys, a.slice);
        for (char& c : vars)
          if (c == ',') c = ' ';
        label += vars;
      }
      if (a.proj_states > 0) {
        label += "\\n" + std::to_string(a.proj_states) + " / " +
                 std::to_string(graph.meta.full_states) + " states";
        std::string red = reduction_label(graph.meta.full_states, a.proj_states);
        if (!red.empty()) label += " (" + red + ")";
      }
      os << "  \"" << dot_escape(id) << "\" [shape=box, fontsize=10, label=\""
         << dot_escape(label) << "\"";
      if (a.status == ObligationStatus::Failed)
        os << ", color=red, fontcolor=red";
      else if (a.status == ObligationStatus::Unknown)
        os << ", color=gray, fontcolor=gray";
      os << "];\n";
      os << "  \"" << dot_escape(n.name) << "\" -> \"" << dot_escape(id) << "\";\n";
      for (uint32_t s : a.supports)
        os << "  \"" << dot_escape(id) << "\" -> \"" << dot_escape(graph.nodes[s].name)
           << "\";\n";
    }
  }
  os << "}\n";
  return os.str();
}

std::string graph_report(const ProofGraph& graph, const TransitionSystem& sys) {
  std::ostringstream os;
  os << "protocol " << graph.meta.protocol << ", root " << graph.meta.root << "\n";
  os << graph.nodes.size() << " lemma(s), " << graph.meta.full_states
     << " reachable states\n\n";
  for (const LemmaNode& n : graph.nodes) {
    os << n.name << " (depth " << n.depth << ")\n";
    os << "  " << expr_to_string(n.body) << "\n";
    for (const ActionNode& a : n.actions) {
      os << "  - " << sys.actions[a.action].name << ": " << to_string(a.status);
      if (a.status == ObligationStatus::Valid ||
          a.status == ObligationStatus::Failed) {
        os << "  [slice " << join_names(sys, a.slice);
        os << "; " << a.sliced_preds << " preds";
        os << "; " << a.proj_states << " projected states";
        std::string red = reduction_label(graph.meta.full_states, a.proj_states);
        if (!red.empty()) os << " (" << red << " reduction)";
        os << "; ctis " << a.ctis_initial << "/" << a.ctis_eliminated << "/"
           << a.ctis_remaining << "]";
      }
      if (!a.supports.empty()) {
        os << "  supports:";
        for (uint32_t s : a.supports) os << " " << graph.nodes[s].name;
      }
      if (!a.failure.empty()) os << "  (" << a.failure << ")";
      os << "\n";
      if (a.status == ObligationStatus::Failed) {
        os << "      surviving counterexamples: " << a.ctis_remaining << "\n";
        for (const std::string& s : a.sample_ctis) os << "      cti " << s << "\n";
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string manifest_to_json(const TransitionSystem& sys, const Instance& inst,
                             const InferenceConfig& cfg, const RunResult& run,
                             const std::string& started_at) {
  ordered_json j;
  j["format"] = "gapslice-manifest-v1";
  j["command"] = "infer";
  j["protocol"] = sys.name;
  j["spec_hash"] = hash_hex(sys.content_hash());
  j["instance_hash"] = hash_hex(inst.content_hash());
  j["started_at"] = started_at;
  ordered_json c;
  c["n_invs"] = cfg.n_invs;
  c["n_ctis"] = cfg.n_ctis;
  c["max_literals"] = cfg.max_literals;
  c["max_rounds"] = cfg.max_rounds;
  c["seed"] = cfg.seed;
  c["workers"] = cfg.workers;
  c["workers_resolved"] = resolve_workers(cfg.workers);
  c["node_timeout_s"] = cfg.node_timeout_s;
  c["global_timeout_s"] = cfg.global_timeout_s;
  c["exhaustive_threshold"] = cfg.exhaustive_threshold;
  c["cti_attempts_factor"] = cfg.cti_attempts_factor;
  j["config"] = std::move(c);
  j["result"] = run.timed_out ? "timeout" : (run.success ? "valid" : "partial");
  j["initiation"] = run.initiation;
  j["total_seconds"] = run.total_seconds;
  j["lemmas"] = run.graph.nodes.size();
  ordered_json iters = ordered_json::array();
  for (const ObligationRecord& r : run.iterations) {
    ordered_json it;
    it["lemma"] = r.lemma;
    it["action"] = r.action;
    it["status"] = to_string(r.status);
    it["seconds"] = r.seconds;
    it["ctis_initial"] = r.inference.ctis_initial;
    it["ctis_eliminated"] = r.inference.ctis_eliminated;
    it["ctis_remaining"] = r.inference.ctis_remaining;
    it["pool_generated"] = r.inference.pool_generated;
    it["pool_distinct"] = r.inference.pool_distinct;
    it["pool_invariants"] = r.inference.pool_invariants;
    it["rounds"] = r.inference.rounds;
    ordered_json nl = ordered_json::array();
    for (const std::string& s : r.new_lemmas) nl.push_back(s);
    it["new_lemmas"] = std::move(nl);
    if (!r.inference.failure.empty()) it["failure"] = r.inference.failure;
    iters.push_back(std::move(it));
  }
  j["iterations"] = std::move(iters);
  return j.dump(2) + "\n";
}

}  // namespace gapslice
