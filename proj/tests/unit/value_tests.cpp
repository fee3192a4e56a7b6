// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
// Runtime values: total order, canonical set/function form, byte encoding.
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "gapslice/util/hash.hpp"
#include "gapslice/value.hpp"

using namespace gapslice;

namespace {

std::string enc(const Value& v) {
  Bytes b;
  v.encode(b);
  return std::string(reinterpret_cast<const char*>(b.data()), b.size());
}

/// Random value of bounded depth, over two small sorts.
Value random_value(Rng& rng, int depth = 2) {
  uint64_t kinds = depth > 0 ? 6 : 3;
  switch (rng.next_below(kinds)) {
    case 0: return Value::boolean(rng.next_bool());
    case 1: return Value::integer(int64_t(rng.next_below(7)) - 3);
    case 2: return Value::atom(uint32_t(rng.next_below(2)), uint32_t(rng.next_below(3)));
    case 3: {
      std::vector<Value> items;
      size_t n = rng.next_below(3);
      for (size_t i = 0; i < n; ++i) items.push_back(random_value(rng, depth - 1));
      return Value::tuple(std::move(items));
    }
    case 4: {
      std::vector<Value> items;
      size_t n = rng.next_below(4);
      for (size_t i = 0; i < n; ++i) items.push_back(random_value(rng, depth - 1));
      return Value::set(std::move(items));
    }
    default: {
      // Functions need distinct keys; use atoms of one sort as the domain.
      size_t n = 1 + rng.next_below(3);
      std::vector<Value> keys, vals;
      for (size_t i = 0; i < n; ++i) {
        keys.push_back(Value::atom(0, uint32_t(i)));
        vals.push_back(random_value(rng, depth - 1));
      }
      return Value::fn(std::move(keys), std::move(vals));
    }
  }
}

}  // namespace

TEST_SUITE("value") {

TEST_CASE("total order ranks kinds before contents") {
  Value f = Value::boolean(false), t = Value::boolean(true);
  Value i1 = Value::integer(-5), i2 = Value::integer(3);
  Value a00 = Value::atom(0, 0), a01 = Value::atom(0, 1), a10 = Value::atom(1, 0);
  Value tup = Value::tuple({i1, i2});
  Value st = Value::set({i1});
  Value fn = Value::fn({a00}, {f});

  CHECK(f < t);
  CHECK(t < i1);  // every boolean sorts before every integer
  CHECK(i1 < i2);
  CHECK(i2 < a00);
  CHECK(a00 < a01);
  CHECK(a01 < a10);  // sort index dominates element index
  CHECK(a10 < tup);
  CHECK(tup < st);
  CHECK(st < fn);

  // Compound values: size first, then lexicographic.
  CHECK(Value::tuple({i2}) < Value::tuple({i1, i1}));
  CHECK(Value::set({i1}) < Value::set({i1, i2}));
  CHECK(Value::tuple({i1, i1}) < Value::tuple({i1, i2}));
}

TEST_CASE("sets are sorted and deduplicated on construction") {
  Value a = Value::integer(3), b = Value::integer(1), c = Value::integer(2);
  Value s = Value::set({a, b, a, c, b});
  REQUIRE(s.size() == 3);
  CHECK(s.items()[0] == b);
  CHECK(s.items()[1] == c);
  CHECK(s.items()[2] == a);
  CHECK(s.set_contains(a));
  CHECK(s.set_contains(b));
  CHECK_FALSE(s.set_contains(Value::integer(7)));

  // Construction order must not matter for identity.
  CHECK(Value::set({c, a, b}) == s);
  CHECK(enc(Value::set({c, a, b})) == enc(s));
}

TEST_CASE("functions sort keys, apply, and update persistently") {
  Value k0 = Value::atom(0, 0), k1 = Value::atom(0, 1);
  Value v0 = Value::integer(10), v1 = Value::integer(20);
  Value f = Value::fn({k1, k0}, {v1, v0});  // keys given out of order

  REQUIRE(f.fn_size() == 2);
  CHECK(f.fn_key(0) == k0);
  CHECK(f.fn_val(0) == v0);
  CHECK(f.fn_apply(k0) == v0);
  CHECK(f.fn_apply(k1) == v1);

  Value g = f.fn_update(k0, Value::integer(99));
  CHECK(g.fn_apply(k0) == Value::integer(99));
  CHECK(g.fn_apply(k1) == v1);
  CHECK(f.fn_apply(k0) == v0);  // original untouched
  CHECK(f != g);

  CHECK_THROWS(f.fn_apply(Value::atom(0, 7)));
}

TEST_CASE("encoding is canonical: equal bytes iff equal values") {
  Rng rng(0xC0FFEE, 1);
  std::map<std::string, Value> by_enc;
  for (int i = 0; i < 4000; ++i) {
    Value v = random_value(rng);
    auto [it, fresh] = by_enc.emplace(enc(v), v);
    if (!fresh) {
      CHECK(it->second == v);  // same bytes -> same value
    }
    CHECK(enc(v) == it->first);  // re-encoding is stable
  }
  // distinct values -> distinct bytes (pairwise over a sample)
  std::vector<Value> vals;
  for (const auto& [e, v] : by_enc) {
    vals.push_back(v);
    if (vals.size() == 60) break;
  }
  for (size_t i = 0; i < vals.size(); ++i)
    for (size_t j = i + 1; j < vals.size(); ++j) {
      CAPTURE(i);
      CAPTURE(j);
      CHECK((vals[i] == vals[j]) == (enc(vals[i]) == enc(vals[j])));
    }
}

TEST_CASE("decode inverts encode") {
  Rng rng(0xDECODE, 2);
  for (int i = 0; i < 2000; ++i) {
    Value v = random_value(rng);
    Bytes b;
    v.encode(b);
    ByteReader r(b);
    Value back = Value::decode(r);
    CHECK(back == v);
    Bytes again;
    back.encode(again);
    CHECK(again == b);
  }
}

TEST_CASE("comparison is a strict weak order on random values") {
  Rng rng(0x5EED, 3);
  std::vector<Value> vs;
  for (int i = 0; i < 40; ++i) vs.push_back(random_value(rng));
  for (const Value& a : vs)
    for (const Value& b : vs) {
      CHECK(a.compare(b) == -b.compare(a));
      CHECK(((a < b) || (b < a) || a == b));
    }
  for (const Value& a : vs)
    for (const Value& b : vs)
      for (const Value& c : vs)
        if (a < b && b < c) CHECK(a < c);
}

TEST_CASE("rendering resolves atom names through the callback") {
  Value v = Value::set({Value::atom(0, 0), Value::atom(0, 1)});
  std::string s = v.to_string([](uint32_t, uint32_t e) {
    return e == 0 ? std::string("n1") : std::string("n2");
  });
  CHECK(s.find("n1") != std::string::npos);
  CHECK(s.find("n2") != std::string::npos);
}

}  // TEST_SUITE
