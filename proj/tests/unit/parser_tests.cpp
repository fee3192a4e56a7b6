// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Protocol/grammar/instance parsing: round trips, structure, diagnostics.
#include <algorithm>
#include <string>

#include "doctest.h"
#include "gapslice/parser.hpp"
#include "test_support.hpp"

using namespace gapslice;
using namespace gapslice::test;

namespace {

/// Line/column of a ParseError produced by parsing `text` as a spec.
SourceSpan error_span(const std::string& text) {
  try {
    parse_spec(text, "bad.gap");
  } catch (const ParseError& e) {
    return e.span();
  }
  FAIL("expected a parse error");
  return {};
}

uint32_t line_count(const std::string& text) {
  return uint32_t(std::count(text.begin(), text.end(), '\n')) + 1;
}

}  // namespace

TEST_SUITE("parser") {

TEST_CASE("pretty-printing round-trips every shipped protocol") {
  for (const auto* file :
       {"simple_consensus.gap", "two_phase.gap", "ring_counter.gap"}) {
    CAPTURE(file);
    TransitionSystem sys = parse_spec(slurp(model_path(file)), file);
    std::string once = sys.pretty();
    TransitionSystem back = parse_spec(once, "pretty");
    CHECK(back.pretty() == once);
    CHECK(back.content_hash() == sys.content_hash());
    CHECK(back.name == sys.name);
    CHECK(back.vars.size() == sys.vars.size());
    CHECK(back.actions.size() == sys.actions.size());
    CHECK(back.lemmas.size() == sys.lemmas.size());
  }
}

TEST_CASE("content hash ignores comments and formatting") {
  const Model& m = ring();
  std::string decorated = "// banner comment\n" + slurp(model_path("ring_counter.gap")) +
                          "\n\n// trailing\n";
  TransitionSystem sys2 = parse_spec(decorated, "decorated");
  CHECK(sys2.content_hash() == m.sys.content_hash());
}

TEST_CASE("consensus protocol structure lands where declared") {
  const TransitionSystem& sys = consensus_n3().sys;
  CHECK(sys.name == "SimpleConsensus");
  REQUIRE(sys.vars.size() == 6);
  REQUIRE(sys.actions.size() == 5);
  REQUIRE(sys.lemmas.size() == 8);
  CHECK(sys.sorts.size() == 2);
  CHECK(sys.consts.size() == 1);
  CHECK(sys.consts[0].name == "Quorum");

  auto action = [&](const char* n) -> const ActionDecl& {
    auto ix = sys.action_index(n);
    REQUIRE(ix.has_value());
    return sys.actions[*ix];
  };
  CHECK(action("SendRequestVote").params.size() == 2);
  CHECK(action("BecomeLeader").params.size() == 2);
  CHECK(action("BecomeLeader").params[1].domain == "Quorum");
  CHECK(action("BecomeLeader").params[1].domain_is_const);

  // Write sets: each action updates exactly the variables it names.
  uint32_t v_req = *sys.var_index("voteRequestMsg");
  uint32_t v_voted = *sys.var_index("voted");
  uint32_t v_msg = *sys.var_index("voteMsg");
  uint32_t v_votes = *sys.var_index("votes");
  uint32_t v_leader = *sys.var_index("leader");
  uint32_t v_decided = *sys.var_index("decided");

  CHECK(action("SendRequestVote").writes(v_req));
  CHECK_FALSE(action("SendRequestVote").writes(v_voted));
  CHECK(action("SendVote").writes(v_msg));
  CHECK(action("SendVote").writes(v_voted));
  CHECK(action("SendVote").writes(v_req));
  CHECK(action("RecvVote").writes(v_votes));
  CHECK_FALSE(action("RecvVote").writes(v_msg));
  CHECK(action("BecomeLeader").writes(v_leader));
  CHECK(action("Decide").writes(v_decided));
  CHECK_FALSE(action("Decide").writes(v_leader));

  CHECK(sys.lemma("NoConflictingValues") != nullptr);
  CHECK(sys.lemma("UniqueLeaders") != nullptr);
  CHECK(sys.lemma("NoSuchLemma") == nullptr);
}

TEST_CASE("encoding order is name-sorted, not declaration-sorted") {
  const TransitionSystem& sys = consensus_n3().sys;
  const auto& order = sys.encoding_order();
  REQUIRE(order.size() == sys.vars.size());
  for (size_t i = 1; i < order.size(); ++i)
    CHECK(sys.vars[order[i - 1]].name < sys.vars[order[i]].name);
}

TEST_CASE("instances bind sorts, constants and ranges") {
  const Model& m = consensus_n3();
  REQUIRE(m.inst.sorts.size() == 2);
  CHECK(m.inst.sorts[*m.sys.sort_index("Node")].elems.size() == 3);
  CHECK(m.inst.sorts[*m.sys.sort_index("Value")].elems.size() == 2);

  auto q = m.inst.consts.find("Quorum");
  REQUIRE(q != m.inst.consts.end());
  CHECK(q->second.kind() == Value::Kind::Set);
  CHECK(q->second.size() == 4);  // three pairs and the full set

  auto atom = m.inst.atom("n2");
  REQUIRE(atom.has_value());
  CHECK(m.inst.atom_name(atom->first, atom->second) == "n2");

  const Model& tp = two_phase_rm3();
  REQUIRE(tp.inst.ranges.count("rmstatus"));
  CHECK(tp.inst.ranges.at("rmstatus") == std::pair<int64_t, int64_t>{0, 3});
  CHECK(tp.inst.ranges.at("tmstatus") == std::pair<int64_t, int64_t>{0, 2});
}

TEST_CASE("instance pretty-printing round-trips and hashes stably") {
  const Model& m = consensus_n3();
  Instance again = parse_instance(m.inst.pretty(), m.sys, "pretty.inst");
  CHECK(again.pretty() == m.inst.pretty());
  CHECK(again.content_hash() == m.inst.content_hash());
}

TEST_CASE("grammar carries predicate footprints and template masks") {
  const Grammar& g = consensus_n3().grammar;
  REQUIRE(g.templates.size() == 1);
  REQUIRE(g.preds.size() == 23);
  CHECK(g.max_literals == 3);
  REQUIRE(g.pred_vars.size() == g.preds.size());
  REQUIRE(g.pred_templates.size() == g.preds.size());

  const TransitionSystem& sys = consensus_n3().sys;
  auto var = [&](const char* n) { return *sys.var_index(n); };

  int param_only = 0;
  for (size_t i = 0; i < g.preds.size(); ++i) {
    CHECK(g.pred_templates[i] != 0);
    std::string text = expr_to_string(g.preds[i]);
    CAPTURE(text);
    if (g.pred_vars[i].empty()) ++param_only;
    if (text == "i = j" || text == "i = k" || text == "j = k")
      CHECK(g.pred_vars[i].empty());
    if (text == "voted[i]")
      CHECK(g.pred_vars[i] == std::vector<uint32_t>{var("voted")});
    if (text == "<<i, j>> in voteMsg")
      CHECK(g.pred_vars[i] == std::vector<uint32_t>{var("voteMsg")});
    if (text == "k in votes[i]")
      CHECK(g.pred_vars[i] == std::vector<uint32_t>{var("votes")});
    if (text == "v in decided[i]")
      CHECK(g.pred_vars[i] == std::vector<uint32_t>{var("decided")});
    if (text == "Q = votes[i]")
      CHECK(g.pred_vars[i] == std::vector<uint32_t>{var("votes")});
  }
  CHECK(param_only == 3);

  // The restricted grammar drops exactly the two quorum-equality predicates.
  const Grammar& ng = consensus_n3_noquorum().grammar;
  CHECK(ng.preds.size() == 21);
  for (const Expr& p : ng.preds)
    CHECK(expr_to_string(p).find("Q = votes") == std::string::npos);
}

TEST_CASE("quantifier template of the consensus grammar") {
  const Grammar& g = consensus_n3().grammar;
  const auto& entries = g.templates[0].entries;
  REQUIRE(entries.size() == 5);
  CHECK_FALSE(entries[0].exists);  // forall i
  CHECK_FALSE(entries[1].exists);  // forall j
  CHECK_FALSE(entries[2].exists);  // forall k
  CHECK(entries[3].exists);        // exists Q
  CHECK_FALSE(entries[4].exists);  // forall v
  CHECK(entries[3].binder.domain == "Quorum");
  CHECK(entries[3].binder.domain_is_const);
  CHECK(entries[4].binder.domain == "Value");
}

TEST_CASE("expression precedence and rendering round-trip") {
  const Model& m = ring();
  auto roundtrip = [&](const std::string& s) {
    Expr e = expr(m, s);
    std::string printed = expr_to_string(e);
    Expr again = parse_lemma_body(printed, m.sys, "rt");
    CHECK(expr_to_string(again) == printed);
    return printed;
  };

  // Disjunction binds looser than conjunction.
  CHECK(roundtrip("a = 1 \\/ b = 1 /\\ c = 1") ==
        roundtrip("a = 1 \\/ (b = 1 /\\ c = 1)"));
  CHECK(roundtrip("a = 1 \\/ b = 1 /\\ c = 1") !=
        roundtrip("(a = 1 \\/ b = 1) /\\ c = 1"));

  // Implication is loosest and right-associative.
  CHECK(roundtrip("a = 0 => b = 0 => c = 0") ==
        roundtrip("a = 0 => (b = 0 => c = 0)"));

  // Negation binds tighter than /\ but looser than comparison.
  CHECK(roundtrip("~a = 1 /\\ b = 1") == roundtrip("(~(a = 1)) /\\ (b = 1)"));

  const Model& sc = consensus_n2();
  auto rt2 = [&](const std::string& s) {
    Expr e = parse_lemma_body(s, sc.sys, "rt");
    std::string printed = expr_to_string(e);
    CHECK(expr_to_string(parse_lemma_body(printed, sc.sys, "rt2")) == printed);
    return printed;
  };
  // Set operators bind tighter than membership.
  CHECK(rt2("<<n1, n2>> in voteMsg cup voteRequestMsg") ==
        rt2("<<n1, n2>> in (voteMsg cup voteRequestMsg)"));
  rt2("forall n in Node : exists Q in Quorum : Q subseteq votes[n]");
  rt2("{ n in Node : voted[n] } = votes[n1]");
  rt2("[ n in Node |-> false ] = leader");
}

TEST_CASE("diagnostics carry positions inside the input") {
  std::string base = "protocol P\nsort S;\nvar x : bool;\ninit { x = false; }\n";

  SUBCASE("unknown variable") {
    std::string text = base + "action A() {\n  require y;\n}\n";
    SourceSpan sp = error_span(text);
    CHECK(sp.line == 6);
    CHECK(sp.line <= line_count(text));
    CHECK(sp.col >= 1);
  }
  SUBCASE("type error in require") {
    std::string text = base + "action A() {\n  require 3;\n}\n";
    SourceSpan sp = error_span(text);
    CHECK(sp.line == 6);
  }
  SUBCASE("unterminated action block") {
    std::string text = base + "action A() {\n  require x;\n";
    SourceSpan sp = error_span(text);
    CHECK(sp.line <= line_count(text) + 1);
  }
  SUBCASE("duplicate variable") {
    CHECK_THROWS_AS(parse_spec("protocol P\nvar x : bool;\nvar x : bool;\n"
                               "init { x = false; }\n", "dup.gap"),
                    ParseError);
  }
  SUBCASE("primed reference outside an action") {
    std::string text = base + "lemma L = x' = x;\n";
    CHECK_THROWS_AS(parse_spec(text, "primed.gap"), ParseError);
  }
  SUBCASE("message names the file") {
    try {
      parse_spec("protocol", "named.gap");
      FAIL("expected error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("named.gap") != std::string::npos);
    }
  }
}

TEST_CASE("instance validation rejects broken bindings") {
  const TransitionSystem& sys = ring().sys;
  // Missing range definition.
  CHECK_THROWS_AS(parse_instance("", sys, "empty.inst"), ParseError);
  // Range with hi < lo.
  CHECK_THROWS_AS(parse_instance("intrange cell 2 1;", sys, "bad.inst"), ParseError);

  const TransitionSystem& sc = consensus_n3().sys;
  // Sort with duplicate elements.
  CHECK_THROWS_AS(
      parse_instance("sort Node = {n1, n1};\nsort Value = {v1};\n"
                     "const Quorum = {{n1}};\n",
                     sc, "dup.inst"),
      ParseError);
  // Constant whose value does not match its declared type.
  CHECK_THROWS_AS(
      parse_instance("sort Node = {n1, n2};\nsort Value = {v1};\n"
                     "const Quorum = {n1};\n",
                     sc, "badtype.inst"),
      ParseError);
  // Spec mentions atom literals that the instance must define (n1, v1 appear
  // in no consensus expressions, but missing sorts entirely must fail).
  CHECK_THROWS_AS(parse_instance("sort Node = {n1, n2};\n", sc, "missing.inst"),
                  ParseError);
}

TEST_CASE("grammar diagnostics") {
  const TransitionSystem& sys = ring().sys;
  // Predicate over an unknown variable.
  CHECK_THROWS_AS(parse_grammar("template;\npred q = 1;\n", sys, "g1.grm"), ParseError);
  // Non-boolean predicate.
  CHECK_THROWS_AS(parse_grammar("template;\npred a + 1;\n", sys, "g2.grm"), ParseError);
  // Template over an unknown sort.
  CHECK_THROWS_AS(parse_grammar("template forall z in Zone;\npred a = 1;\n", sys,
                                "g3.grm"),
                  ParseError);
  // A well-formed grammar parses and keeps declaration order.
  Grammar g = parse_grammar("template;\npred a = 0;\npred b = 0;\nmaxliterals 2;\n",
                            sys, "g4.grm");
  REQUIRE(g.preds.size() == 2);
  CHECK(expr_to_string(g.preds[0]) == "a = 0");
  CHECK(expr_to_string(g.preds[1]) == "b = 0");
  CHECK(g.max_literals == 2);
}

}  // TEST_SUITE
