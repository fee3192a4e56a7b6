// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "test_support.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <deque>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>

#ifndef GAPSLICE_MODELS_DIR
#error "GAPSLICE_MODELS_DIR must be defined by the build"
#endif
#ifndef GAPSLICE_CLI_PATH
#define GAPSLICE_CLI_PATH ""
#endif

namespace gapslice::test {

namespace fs = std::filesystem;

std::string model_path(const std::string& name) {
  return std::string(GAPSLICE_MODELS_DIR) + "/" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const Model& load_model(const std::string& spec_file, const std::string& inst_file,
                        const std::string& grm_file) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Model>> cache;
  std::lock_guard<std::mutex> lock(mu);
  std::string key = spec_file + "|" + inst_file + "|" + grm_file;
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;

  auto m = std::make_unique<Model>();
  m->sys = parse_spec(slurp(model_path(spec_file)), spec_file);
  m->inst = parse_instance(slurp(model_path(inst_file)), m->sys, inst_file);
  if (!grm_file.empty())
    m->grammar = parse_grammar(slurp(model_path(grm_file)), m->sys, grm_file);
  return *cache.emplace(key, std::move(m)).first->second;
}

const Model& ring() {
  return load_model("ring_counter.gap", "ring_counter.inst", "ring_counter.grm");
}
const Model& two_phase_rm2() {
  return load_model("two_phase.gap", "two_phase_rm2.inst", "two_phase.grm");
}
const Model& two_phase_rm3() {
  return load_model("two_phase.gap", "two_phase_rm3.inst", "two_phase.grm");
}
const Model& consensus_n2() {
  return load_model("simple_consensus.gap", "simple_consensus_n2v2.inst",
                    "simple_consensus_full.grm");
}
const Model& consensus_n3() {
  return load_model("simple_consensus.gap", "simple_consensus_n3v2.inst",
                    "simple_consensus_full.grm");
}
const Model& consensus_n3_noquorum() {
  return load_model("simple_consensus.gap", "simple_consensus_n3v2.inst",
                    "simple_consensus_noquorum.grm");
}

const ReachResult& reach_of(const Model& m) {
  static std::mutex mu;
  static std::map<const Model*, std::unique_ptr<ReachResult>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(&m);
  if (it != cache.end()) return *it->second;
  auto r = std::make_unique<ReachResult>(reachable_states(m.sys, m.inst));
  return *cache.emplace(&m, std::move(r)).first->second;
}

// ---------------------------------------------------------------------------

bool eval_on(const Model& m, const Expr& e, const State& s) {
  Env env(m.sys, m.inst);
  env.pre = StateView::of(s);
  return eval_bool(e, env);
}

bool eval_on_row(const Model& m, const Expr& e, const StateSet& set, uint32_t row) {
  Env env(m.sys, m.inst);
  env.pre = StateView{set.row(row), set.col_map().data()};
  return eval_bool(e, env);
}

Expr expr(const Model& m, const std::string& text) {
  return parse_lemma_body(text, m.sys, "<test expr>");
}

bool declared_lemmas_hold(const Model& m, const State& s) {
  Env env(m.sys, m.inst);
  env.pre = StateView::of(s);
  for (const auto& lm : m.sys.lemmas)
    if (!eval_bool(lm.body, env)) return false;
  return true;
}

State state_of_row(const TransitionSystem& sys, const StateSet& set, uint32_t row) {
  State s;
  s.v.resize(sys.vars.size());
  for (uint32_t v = 0; v < sys.vars.size(); ++v) {
    int32_t c = set.col_of(v);
    if (c < 0) throw std::runtime_error("state_of_row: schema does not cover " +
                                        sys.vars[v].name);
    s.v[v] = set.row(row)[c];
  }
  return s;
}

std::string encode_for(const StateSet& set, const State& s) {
  Bytes enc;
  for (uint32_t c = 0; c < set.width(); ++c) s.v[set.schema()[c]].encode(enc);
  return std::string(reinterpret_cast<const char*>(enc.data()), enc.size());
}

bool contains_state(const StateSet& set, const State& s) {
  return set.find_encoding(encode_for(set, s)).has_value();
}

// ---------------------------------------------------------------------------

uint64_t count_satisfying(const Model& m, const Expr& e) {
  Env env(m.sys, m.inst);
  uint64_t n = 0;
  for_each_type_state(m.sys, m.inst, [&](const State& s) {
    env.pre = StateView::of(s);
    if (eval_bool(e, env)) ++n;
    return true;
  });
  return n;
}

bool holds_everywhere(const Model& m, const Expr& e) {
  Env env(m.sys, m.inst);
  bool ok = true;
  for_each_type_state(m.sys, m.inst, [&](const State& s) {
    env.pre = StateView::of(s);
    ok = eval_bool(e, env);
    return ok;
  });
  return ok;
}

bool semantically_equal(const Model& m, const Expr& a, const Expr& b) {
  Env env(m.sys, m.inst);
  bool equal = true;
  for_each_type_state(m.sys, m.inst, [&](const State& s) {
    env.pre = StateView::of(s);
    equal = eval_bool(a, env) == eval_bool(b, env);
    return equal;
  });
  return equal;
}

InductiveVerdict oracle_inductive(const Model& m, const Expr& e) {
  InductiveVerdict v;

  // Collect the satisfying set once; consecution is then membership only.
  StateSet sat = StateSet::full(m.sys);
  Env env(m.sys, m.inst);
  for_each_type_state(m.sys, m.inst, [&](const State& s) {
    env.pre = StateView::of(s);
    if (eval_bool(e, env)) sat.insert(s);
    return true;
  });
  v.satisfying = sat.size();

  v.initiation = true;
  for (const State& s : init_states(m.sys, m.inst)) {
    env.pre = StateView::of(s);
    if (!eval_bool(e, env)) v.initiation = false;
  }

  for (uint32_t i = 0; i < sat.size(); ++i) {
    State pre = state_of_row(m.sys, sat, i);
    for (const State& succ : successors(m.sys, m.inst, pre))
      if (!contains_state(sat, succ)) ++v.consecution_violations;
  }
  return v;
}

bool oracle_obligation_valid(const Model& m, const std::vector<Expr>& supports,
                             const Expr& lemma, uint32_t action_ix) {
  const ActionDecl& action = m.sys.actions[action_ix];
  auto bindings = action_bindings(m.sys, m.inst, action);
  Env env(m.sys, m.inst);
  bool valid = true;
  for_each_type_state(m.sys, m.inst, [&](const State& pre) {
    env.pre = StateView::of(pre);
    env.post = {};
    if (!eval_bool(lemma, env)) return true;
    for (const Expr& sup : supports)
      if (!eval_bool(sup, env)) return true;
    for (const auto& b : bindings) {
      if (!action_enabled(m.sys, m.inst, pre, action_ix, b)) continue;
      State post = apply_action(m.sys, m.inst, pre, action_ix, b);
      Env penv(m.sys, m.inst);
      penv.pre = StateView::of(post);
      if (!eval_bool(lemma, penv)) {
        valid = false;
        return false;
      }
    }
    return true;
  });
  return valid;
}

bool is_genuine_cti(const Model& m, const std::vector<Expr>& supports,
                    const Expr& lemma, uint32_t action_ix, const Cti& cti) {
  Env env(m.sys, m.inst);
  env.pre = StateView::of(cti.pre);
  if (!eval_bool(lemma, env)) return false;
  for (const Expr& sup : supports)
    if (!eval_bool(sup, env)) return false;
  if (!action_enabled(m.sys, m.inst, cti.pre, action_ix, cti.binding)) return false;
  State post = apply_action(m.sys, m.inst, cti.pre, action_ix, cti.binding);
  if (!(post == cti.post)) return false;
  Env penv(m.sys, m.inst);
  penv.pre = StateView::of(cti.post);
  return !eval_bool(lemma, penv);
}

std::vector<std::string> oracle_reach_encodings(const Model& m) {
  StateSet layout = StateSet::full(m.sys);  // encoding layout only
  std::set<std::string> seen;
  std::deque<State> frontier;
  for (const State& s : init_states(m.sys, m.inst))
    if (seen.insert(encode_for(layout, s)).second) frontier.push_back(s);
  while (!frontier.empty()) {
    State s = std::move(frontier.front());
    frontier.pop_front();
    for (const State& succ : successors(m.sys, m.inst, s))
      if (seen.insert(encode_for(layout, succ)).second) frontier.push_back(succ);
  }
  return {seen.begin(), seen.end()};
}

// ---------------------------------------------------------------------------

std::string cli_path() {
  std::string p = GAPSLICE_CLI_PATH;
  if (p.empty()) throw std::runtime_error("CLI path not compiled into this binary");
  return p;
}

static std::string shell_quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'')
      q += "'\\''";
    else
      q += c;
  }
  return q + "'";
}

CmdResult run_command(const std::string& command_line) {
  TempDir capture;
  std::string out_file = capture.file("out");
  std::string err_file = capture.file("err");
  std::string full = command_line + " > " + shell_quote(out_file) + " 2> " +
                     shell_quote(err_file);
  int rc = std::system(full.c_str());
  CmdResult r;
  if (rc == -1)
    r.exit_code = -1;
  else if (WIFEXITED(rc))
    r.exit_code = WEXITSTATUS(rc);
  else
    r.exit_code = 128 + (WIFSIGNALED(rc) ? WTERMSIG(rc) : 0);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

CmdResult run_cli(const std::vector<std::string>& args) {
  std::string cmd = shell_quote(cli_path());
  for (const auto& a : args) cmd += " " + shell_quote(a);
  return run_command(cmd);
}

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "gapslice-test-XXXXXX").string();
  std::vector<char> buf(tmpl.begin(), tmpl.end());
  buf.push_back('\0');
  if (!mkdtemp(buf.data())) throw std::runtime_error("mkdtemp failed");
  path_ = buf.data();
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_file(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

}  // namespace gapslice::test
