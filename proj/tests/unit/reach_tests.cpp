// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Breadth-first reachability: pinned counts, closure against an independent
// BFS oracle, exploration budgets, and cache-file round trips.
#include <algorithm>
#include <set>
#include <string>

#include "doctest.h"
#include "gapslice/reach.hpp"
#include "test_support.hpp"

using namespace gapslice;
using namespace gapslice::test;

namespace {

std::vector<std::string> canonical_encodings(const StateSet& s) {
  std::vector<std::string> out;
  out.reserve(s.size());
  for (uint32_t id : s.canonical_order()) out.emplace_back(s.encoding(id));
  return out;
}

}  // namespace

TEST_SUITE("reach") {

TEST_CASE("pinned exhaustive counts") {
  const ReachResult& rc = reach_of(ring());
  CHECK(rc.states.size() == 3);
  CHECK(rc.transitions == 3);
  CHECK(rc.depth == 2);
  CHECK(rc.complete);

  const ReachResult& t2 = reach_of(two_phase_rm2());
  CHECK(t2.states.size() == 56);
  CHECK(t2.complete);

  const ReachResult& t3 = reach_of(two_phase_rm3());
  CHECK(t3.states.size() == 288);
  CHECK(t3.complete);

  const ReachResult& c2 = reach_of(consensus_n2());
  CHECK(c2.states.size() == 336);
  CHECK(c2.transitions == 2112);
  CHECK(c2.depth == 11);
  CHECK(c2.complete);
}

TEST_CASE("reachable sets agree with an independent BFS oracle") {
  for (const Model* mp : {&ring(), &two_phase_rm2(), &consensus_n2()}) {
    const Model& m = *mp;
    const ReachResult& r = reach_of(m);
    std::vector<std::string> oracle = oracle_reach_encodings(m);
    std::vector<std::string> engine = canonical_encodings(r.states);
    std::sort(engine.begin(), engine.end());
    CHECK(engine == oracle);
  }
}

TEST_CASE("exhaustive sets are transition-closed") {
  for (const Model* mp : {&ring(), &two_phase_rm2()}) {
    const Model& m = *mp;
    const StateSet& R = reach_of(m).states;
    uint64_t outside = 0;
    for (uint32_t i = 0; i < R.size(); ++i) {
      State s = state_of_row(m.sys, R, i);
      for (const State& succ : successors(m.sys, m.inst, s))
        if (!contains_state(R, succ)) ++outside;
    }
    CHECK(outside == 0);
    for (const State& s : init_states(m.sys, m.inst)) CHECK(contains_state(R, s));
  }
}

TEST_CASE("exploration runs are deterministic") {
  const Model& m = two_phase_rm2();
  ReachResult a = reachable_states(m.sys, m.inst);
  ReachResult b = reachable_states(m.sys, m.inst);
  REQUIRE(a.states.size() == b.states.size());
  // Insertion ids (BFS order), not just the set, must match.
  for (uint32_t i = 0; i < a.states.size(); ++i)
    CHECK(a.states.encoding(i) == b.states.encoding(i));
  CHECK(a.transitions == b.transitions);
  CHECK(a.depth == b.depth);
}

TEST_CASE("a state budget stops the search and marks it incomplete") {
  const Model& m = two_phase_rm3();
  ReachOptions opts;
  opts.max_states = 40;
  ReachResult r = reachable_states(m.sys, m.inst, opts);
  CHECK_FALSE(r.complete);
  CHECK(r.states.size() >= 40);
  CHECK(r.states.size() < 288);

  // Everything found under a budget lies inside the true reachable set.
  const StateSet& full = reach_of(m).states;
  for (uint32_t i = 0; i < r.states.size(); ++i)
    CHECK(full.find_encoding(r.states.encoding(i)).has_value());
}

TEST_CASE("canonical order sorts by encoding and is a permutation") {
  const StateSet& R = reach_of(two_phase_rm2()).states;
  auto order = R.canonical_order();
  REQUIRE(order.size() == R.size());
  std::set<uint32_t> distinct(order.begin(), order.end());
  CHECK(distinct.size() == order.size());
  for (size_t i = 1; i < order.size(); ++i)
    CHECK(R.encoding(order[i - 1]) < R.encoding(order[i]));
}

TEST_CASE("cache files survive a save/load/save round trip byte-for-byte") {
  const Model& m = two_phase_rm2();
  const StateSet& R = reach_of(m).states;
  uint64_t sh = m.sys.content_hash(), ih = m.inst.content_hash();

  TempDir tmp;
  std::string p1 = tmp.file("r1.gapr"), p2 = tmp.file("r2.gapr");
  R.save(p1, sh, ih);
  StateSet loaded = StateSet::load(p1, m.sys, sh, ih);
  REQUIRE(loaded.size() == R.size());
  CHECK(canonical_encodings(loaded) == canonical_encodings(R));
  CHECK(loaded.schema_names() == R.schema_names());

  loaded.save(p2, sh, ih);
  CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("cache loading verifies identity hashes") {
  const Model& m = ring();
  const StateSet& R = reach_of(m).states;
  uint64_t sh = m.sys.content_hash(), ih = m.inst.content_hash();
  TempDir tmp;
  std::string p = tmp.file("ring.gapr");
  R.save(p, sh, ih);

  CHECK_THROWS_AS(StateSet::load(p, m.sys, sh + 1, ih), CacheError);
  CHECK_THROWS_AS(StateSet::load(p, m.sys, sh, ih ^ 0xff), CacheError);
  CHECK(StateSet::load(p, m.sys, std::nullopt, std::nullopt).size() == R.size());

  // A truncated file is rejected, not misread.
  std::string bytes = slurp(p);
  write_file(tmp.file("trunc.gapr"), bytes.substr(0, bytes.size() / 2));
  CHECK_THROWS_AS(StateSet::load(tmp.file("trunc.gapr"), m.sys, sh, ih), CacheError);

  // A corrupted payload byte breaks the checksum.
  bytes[bytes.size() - 9] ^= 0x01;
  write_file(tmp.file("corrupt.gapr"), bytes);
  CHECK_THROWS_AS(StateSet::load(tmp.file("corrupt.gapr"), m.sys, sh, ih), CacheError);
}

}  // TEST_SUITE

TEST_SUITE("projection") {

TEST_CASE("projected row sets equal the brute-force distinct tuples") {
  const Model& m = consensus_n2();
  const StateSet& R = reach_of(m).states;
  ProjectionCache cache(m.sys, R, m.sys.content_hash(), m.inst.content_hash());

  auto vars = [&](std::initializer_list<const char*> names) {
    std::vector<uint32_t> v;
    for (const char* n : names) v.push_back(*m.sys.var_index(n));
    return v;
  };

  for (auto subset : {vars({"leader", "decided"}), vars({"leader", "votes"}),
                      vars({"voteMsg", "votes"}), vars({"voted"})}) {
    const StateSet& proj = cache.project(subset);

    // Oracle: distinct projected tuples collected with a plain set.
    std::set<std::string> distinct;
    StateSet layout(m.sys, subset);
    for (uint32_t i = 0; i < R.size(); ++i) {
      State full = state_of_row(m.sys, R, i);
      Bytes enc;
      for (uint32_t c = 0; c < layout.width(); ++c)
        full.v[layout.schema()[c]].encode(enc);
      distinct.emplace(reinterpret_cast<const char*>(enc.data()), enc.size());
    }
    CHECK(proj.size() == distinct.size());
    for (uint32_t i = 0; i < proj.size(); ++i)
      CHECK(distinct.count(std::string(proj.encoding(i))));
  }
}

TEST_CASE("monotone in the variable set and never larger than the source") {
  const Model& m = consensus_n2();
  const StateSet& R = reach_of(m).states;
  ProjectionCache cache(m.sys, R, m.sys.content_hash(), m.inst.content_hash());

  std::vector<uint32_t> v1{*m.sys.var_index("leader")};
  std::vector<uint32_t> v2{*m.sys.var_index("leader"), *m.sys.var_index("votes")};
  std::vector<uint32_t> v3{*m.sys.var_index("leader"), *m.sys.var_index("votes"),
                           *m.sys.var_index("decided")};
  size_t s1 = cache.project(v1).size();
  size_t s2 = cache.project(v2).size();
  size_t s3 = cache.project(v3).size();
  CHECK(s1 <= s2);
  CHECK(s2 <= s3);
  CHECK(s3 <= R.size());
}

TEST_CASE("projecting a projection changes nothing") {
  const Model& m = two_phase_rm3();
  const StateSet& R = reach_of(m).states;
  ProjectionCache cache(m.sys, R, m.sys.content_hash(), m.inst.content_hash());
  std::vector<uint32_t> vars{*m.sys.var_index("rmState"), *m.sys.var_index("tmState")};
  const StateSet& once = cache.project(vars);

  StateSet twice(m.sys, vars);
  for (uint32_t i = 0; i < once.size(); ++i) twice.insert_row(once.row(i));
  REQUIRE(twice.size() == once.size());
  std::vector<std::string> a = canonical_encodings(once);
  std::vector<std::string> b = canonical_encodings(twice);
  CHECK(a == b);
}

TEST_CASE("projection memoization returns the same object") {
  const Model& m = ring();
  const StateSet& R = reach_of(m).states;
  ProjectionCache cache(m.sys, R, m.sys.content_hash(), m.inst.content_hash());
  std::vector<uint32_t> vars{0, 1};
  const StateSet* first = &cache.project(vars);
  size_t computed = cache.computed();
  const StateSet* second = &cache.project(vars);
  CHECK(first == second);
  CHECK(cache.computed() == computed);
}

TEST_CASE("disk-backed projections reload identically") {
  const Model& m = consensus_n2();
  const StateSet& R = reach_of(m).states;
  std::vector<uint32_t> vars{*m.sys.var_index("voteMsg"), *m.sys.var_index("votes")};

  TempDir tmp;
  std::vector<std::string> computed, reloaded;
  {
    ProjectionCache c1(m.sys, R, m.sys.content_hash(), m.inst.content_hash(),
                       tmp.path());
    computed = canonical_encodings(c1.project(vars));
  }
  {
    ProjectionCache c2(m.sys, R, m.sys.content_hash(), m.inst.content_hash(),
                       tmp.path());
    reloaded = canonical_encodings(c2.project(vars));
  }
  CHECK_FALSE(computed.empty());
  CHECK(computed == reloaded);
}

TEST_CASE("schema order is name-sorted regardless of request order") {
  const Model& m = consensus_n2();
  const StateSet& R = reach_of(m).states;
  ProjectionCache cache(m.sys, R, m.sys.content_hash(), m.inst.content_hash());
  std::vector<uint32_t> fwd{*m.sys.var_index("votes"), *m.sys.var_index("leader")};
  std::vector<uint32_t> rev{*m.sys.var_index("leader"), *m.sys.var_index("votes")};
  const StateSet& a = cache.project(fwd);
  const StateSet& b = cache.project(rev);
  CHECK(&a == &b);  // one cache entry, canonical key
  REQUIRE(a.schema_names().size() == 2);
  CHECK(a.schema_names()[0] == "leader");
  CHECK(a.schema_names()[1] == "votes");
}

}  // TEST_SUITE
