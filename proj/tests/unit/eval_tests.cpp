// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// The semantic evaluator: literal cases pinned by hand, transition
// round-trips, initial-state enumeration, and evaluation errors.
#include <set>
#include <string>

#include "doctest.h"
#include "gapslice/cti.hpp"
#include "gapslice/eval.hpp"
#include "gapslice/parser.hpp"
#include "test_support.hpp"

using namespace gapslice;
using namespace gapslice::test;

namespace {

State the_init(const Model& m) {
  auto inits = init_states(m.sys, m.inst);
  REQUIRE(inits.size() == 1);
  return inits[0];
}

Value atom_of(const Model& m, const std::string& name) {
  auto a = m.inst.atom(name);
  REQUIRE(a.has_value());
  return Value::atom(a->first, a->second);
}

}  // namespace

TEST_SUITE("eval") {

TEST_CASE("initial consensus state: nobody leads, votes, or decides") {
  const Model& m = consensus_n3();
  State init = the_init(m);

  CHECK_FALSE(eval_on(m, expr(m, "leader[n1]"), init));
  CHECK_FALSE(eval_on(m, expr(m, "voted[n2]"), init));
  CHECK(eval_on(m, expr(m, "votes[n1] = {}"), init));
  CHECK(eval_on(m, expr(m, "decided[n3] = {}"), init));
  CHECK(eval_on(m, expr(m, "voteMsg = {}"), init));
  CHECK(eval_on(m, expr(m, "voteRequestMsg = {}"), init));
}

TEST_CASE("reflexive equality holds on arbitrary type-correct states") {
  const Model& m = consensus_n2();
  Expr e = expr(m, "forall n in Node : votes[n] = votes[n]");
  Expr e2 = expr(m, "voteMsg = voteMsg");
  StateSampler sampler(m.sys, m.inst);
  for (int i = 0; i < 100; ++i) {
    Rng rng(11, i);
    State s = sampler.sample(rng);
    CHECK(eval_on(m, e, s));
    CHECK(eval_on(m, e2, s));
  }
}

TEST_CASE("tuple membership sees exactly the stored pairs") {
  const Model& m = consensus_n3();
  State s = the_init(m);
  uint32_t v_msg = *m.sys.var_index("voteMsg");
  s.v[v_msg] = Value::set({Value::tuple({atom_of(m, "n2"), atom_of(m, "n1")})});

  CHECK(eval_on(m, expr(m, "<<n2, n1>> in voteMsg"), s));
  CHECK_FALSE(eval_on(m, expr(m, "<<n1, n2>> in voteMsg"), s));
  CHECK(eval_on(m, expr(m, "~(<<n1, n2>> in voteMsg)"), s));
}

TEST_CASE("guard evaluation gates the transition") {
  const Model& m = consensus_n3();
  State init = the_init(m);
  uint32_t decide = *m.sys.action_index("Decide");

  // Nobody is a leader initially, so Decide is disabled for every binding.
  for (const auto& b : action_bindings(m.sys, m.inst, m.sys.actions[decide]))
    CHECK_FALSE(action_enabled(m.sys, m.inst, init, decide, b));
}

TEST_CASE("request transition adds exactly one pair and nothing else") {
  const Model& m = consensus_n3();
  State init = the_init(m);
  uint32_t srv = *m.sys.action_index("SendRequestVote");
  std::vector<Value> binding{atom_of(m, "n1"), atom_of(m, "n2")};

  REQUIRE(action_enabled(m.sys, m.inst, init, srv, binding));
  State post = apply_action(m.sys, m.inst, init, srv, binding);

  uint32_t v_req = *m.sys.var_index("voteRequestMsg");
  CHECK(post.v[v_req] ==
        Value::set({Value::tuple({atom_of(m, "n1"), atom_of(m, "n2")})}));
  for (uint32_t v = 0; v < m.sys.vars.size(); ++v)
    if (v != v_req) CHECK(post.v[v] == init.v[v]);
}

TEST_CASE("a quorum of recorded votes lets a node become leader") {
  const Model& m = consensus_n3();
  State s = the_init(m);
  uint32_t v_votes = *m.sys.var_index("votes");
  Value n1 = atom_of(m, "n1"), n2 = atom_of(m, "n2"), n3 = atom_of(m, "n3");
  s.v[v_votes] = s.v[v_votes].fn_update(n1, Value::set({n1, n2}));

  uint32_t bl = *m.sys.action_index("BecomeLeader");
  std::vector<Value> good{n1, Value::set({n1, n2})};
  std::vector<Value> bad{n1, Value::set({n1, n3})};  // not a subset of votes[n1]
  std::vector<Value> other{n2, Value::set({n1, n2})};

  REQUIRE(action_enabled(m.sys, m.inst, s, bl, good));
  CHECK_FALSE(action_enabled(m.sys, m.inst, s, bl, bad));
  CHECK_FALSE(action_enabled(m.sys, m.inst, s, bl, other));

  State post = apply_action(m.sys, m.inst, s, bl, good);
  CHECK(eval_on(m, expr(m, "leader[n1]"), post));
  CHECK_FALSE(eval_on(m, expr(m, "leader[n2]"), post));
}

TEST_CASE("initial state fans out to all nine request transitions") {
  const Model& m = consensus_n3();
  State init = the_init(m);

  std::vector<std::pair<uint32_t, std::vector<Value>>> seen;
  for_each_transition(m.sys, m.inst, init,
                      [&](uint32_t a, const std::vector<Value>& b, const State&) {
                        seen.emplace_back(a, b);
                        return true;
                      });
  REQUIRE(seen.size() == 9);
  uint32_t srv = *m.sys.action_index("SendRequestVote");
  std::set<std::string> pairs;
  for (const auto& [a, b] : seen) {
    CHECK(a == srv);
    REQUIRE(b.size() == 2);
    pairs.insert(m.inst.atom_name(b[0].atom_sort(), b[0].atom_elem()) + "," +
                 m.inst.atom_name(b[1].atom_sort(), b[1].atom_elem()));
  }
  CHECK(pairs.size() == 9);  // the full src x dst cross product

  // Binding order is canonical: last parameter fastest.
  CHECK(seen[0].second[0] == atom_of(m, "n1"));
  CHECK(seen[0].second[1] == atom_of(m, "n1"));
  CHECK(seen[1].second[0] == atom_of(m, "n1"));
  CHECK(seen[1].second[1] == atom_of(m, "n2"));
  CHECK(seen[3].second[0] == atom_of(m, "n2"));

  CHECK(successors(m.sys, m.inst, init).size() == 9);
}

TEST_CASE("a state with every guard false has no successors") {
  const Model& m = ring();
  State dead;
  dead.v = {Value::integer(2), Value::integer(2), Value::integer(2)};
  CHECK(successors(m.sys, m.inst, dead).empty());
}

TEST_CASE("transitions re-verify their own guard and updates") {
  // For every transition out of every reachable state: the guard holds on
  // the pre-state, updated variables equal their update expressions
  // evaluated on the pre-state, and untouched variables carry over.
  for (const Model* mp : {&ring(), &two_phase_rm2()}) {
    const Model& m = *mp;
    const ReachResult& r = reach_of(m);
    for (uint32_t i = 0; i < r.states.size(); ++i) {
      State pre = state_of_row(m.sys, r.states, i);
      for_each_transition(
          m.sys, m.inst, pre,
          [&](uint32_t a, const std::vector<Value>& b, const State& post) {
            REQUIRE(action_enabled(m.sys, m.inst, pre, a, b));
            const ActionDecl& act = m.sys.actions[a];
            Env env(m.sys, m.inst);
            env.pre = StateView::of(pre);
            env.frame = b;
            for (const auto& [var, rhs] : act.updates)
              CHECK(post.v[var] == eval(*rhs, env));
            for (uint32_t v = 0; v < m.sys.vars.size(); ++v)
              if (!act.writes(v)) CHECK(post.v[v] == pre.v[v]);
            return true;
          });
    }
  }
}

TEST_CASE("identity updates return the input state") {
  TransitionSystem sys = parse_spec(
      "protocol Idem\n"
      "var x : int r;\n"
      "var y : bool;\n"
      "init { x = 0; y = false; }\n"
      "action Noop() { require true; x' = x; y' = y; }\n"
      "action Implicit() { require true; }\n",
      "idem.gap");
  Instance inst = parse_instance("intrange r 0 3;", sys, "idem.inst");

  State s;
  s.v = {Value::integer(2), Value::boolean(true)};
  CHECK(apply_action(sys, inst, s, 0, {}) == s);
  CHECK(apply_action(sys, inst, s, 1, {}) == s);
}

TEST_CASE("choice initializers enumerate the cross product") {
  TransitionSystem sys = parse_spec(
      "protocol Choice\n"
      "var x : int r;\n"
      "var y : int r;\n"
      "var z : bool;\n"
      "init { x in {0, 1}; y in {1, 2, 3}; z = false; }\n"
      "action Nop() { require true; }\n",
      "choice.gap");
  Instance inst = parse_instance("intrange r 0 3;", sys, "choice.inst");

  auto inits = init_states(sys, inst);
  REQUIRE(inits.size() == 6);
  std::set<std::pair<int64_t, int64_t>> seen;
  for (const State& s : inits) {
    seen.insert({s.v[0].as_int(), s.v[1].as_int()});
    CHECK_FALSE(s.v[2].as_bool());
  }
  CHECK(seen.size() == 6);
  CHECK(seen.count({0, 1}));
  CHECK(seen.count({1, 3}));

  // Enumeration order is deterministic.
  auto again = init_states(sys, inst);
  for (size_t i = 0; i < inits.size(); ++i) CHECK(inits[i] == again[i]);
}

TEST_CASE("out-of-range updates are evaluation errors") {
  TransitionSystem sys = parse_spec(
      "protocol Ovf\n"
      "var a : int cell;\n"
      "init { a = 2; }\n"
      "action Inc() { require true; a' = a + 1; }\n",
      "ovf.gap");
  Instance inst = parse_instance("intrange cell 0 2;", sys, "ovf.inst");
  State s;
  s.v = {Value::integer(2)};
  CHECK_THROWS_AS(apply_action(sys, inst, s, 0, {}), EvalError);

  // In range, the same action is fine.
  s.v = {Value::integer(1)};
  CHECK(apply_action(sys, inst, s, 0, {}).v[0] == Value::integer(2));
}

TEST_CASE("evaluation is pure") {
  const Model& m = consensus_n2();
  Expr e = expr(m, "forall n in Node : leader[n] => (exists Q in Quorum : Q subseteq votes[n])");
  StateSampler sampler(m.sys, m.inst);
  for (int i = 0; i < 50; ++i) {
    Rng rng(99, i);
    State s = sampler.sample(rng);
    bool first = eval_on(m, e, s);
    for (int k = 0; k < 3; ++k) CHECK(eval_on(m, e, s) == first);
  }
}

}  // TEST_SUITE
