// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/instance.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "gapslice/parser.hpp"
#include "gapslice/util/hash.hpp"

namespace gapslice {

namespace {

constexpr uint64_t kSizeMax = std::numeric_limits<int64_t>::max();

uint64_t mul_sat(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSizeMax / b) return kSizeMax;
  return a * b;
}

uint64_t pow_sat(uint64_t base, uint64_t exp) {
  uint64_t r = 1;
  for (uint64_t i = 0; i < exp; ++i) r = mul_sat(r, base);
  return r;
}

}  // namespace

std::optional<uint32_t> Instance::sort_index(const std::string& n) const {
  for (uint32_t i = 0; i < sorts.size(); ++i)
    if (sorts[i].name == n) return i;
  return std::nullopt;
}

void Instance::build_atom_index() const {
  for (uint32_t s = 0; s < sorts.size(); ++s)
    for (uint32_t e = 0; e < sorts[s].elems.size(); ++e)
      atom_ix_.emplace(sorts[s].elems[e], std::make_pair(s, e));
}

std::optional<std::pair<uint32_t, uint32_t>> Instance::atom(const std::string& elem) const {
  if (atom_ix_.empty()) build_atom_index();
  auto it = atom_ix_.find(elem);
  if (it == atom_ix_.end()) return std::nullopt;
  return it->second;
}

std::string Instance::atom_name(uint32_t sort, uint32_t elem) const {
  if (sort < sorts.size() && elem < sorts[sort].elems.size())
    return sorts[sort].elems[elem];
  return "s" + std::to_string(sort) + "#" + std::to_string(elem);
}

std::vector<Value> Instance::enumerate(const Type& t) const {
  switch (t.k) {
    case Type::K::Bool:
      return {Value::boolean(false), Value::boolean(true)};
    case Type::K::Sort: {
      auto si = sort_index(t.name);
      if (!si) throw std::invalid_argument("unknown sort '" + t.name + "'");
      std::vector<Value> out;
      for (uint32_t e = 0; e < sorts[*si].elems.size(); ++e)
        out.push_back(Value::atom(*si, e));
      return out;
    }
    case Type::K::Int:
      throw std::invalid_argument("cannot enumerate unbounded integers");
    case Type::K::IntRange: {
      auto it = ranges.find(t.name);
      if (it == ranges.end())
        throw std::invalid_argument("undefined integer range '" + t.name + "'");
      std::vector<Value> out;
      for (int64_t i = it->second.first; i <= it->second.second; ++i)
        out.push_back(Value::integer(i));
      return out;
    }
    case Type::K::Set: {
      std::vector<Value> elems = enumerate(t.elem());
      if (elems.size() > 24) throw std::invalid_argument("set type too large to enumerate");
      std::vector<Value> out;
      out.reserve(size_t(1) << elems.size());
      for (uint64_t mask = 0; mask < (uint64_t(1) << elems.size()); ++mask) {
        std::vector<Value> members;
        for (size_t i = 0; i < elems.size(); ++i)
          if (mask >> i & 1) members.push_back(elems[i]);
        out.push_back(Value::set(std::move(members)));
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    case Type::K::Tuple: {
      std::vector<std::vector<Value>> parts;
      uint64_t total = 1;
      for (const auto& pt : t.args) {
        parts.push_back(enumerate(pt));
        total = mul_sat(total, parts.back().size());
        if (total > (uint64_t(1) << 24))
          throw std::invalid_argument("tuple type too large to enumerate");
      }
      std::vector<Value> out;
      out.reserve(total);
      std::vector<size_t> ix(parts.size(), 0);
      for (uint64_t n = 0; n < total; ++n) {
        std::vector<Value> items;
        items.reserve(parts.size());
        for (size_t i = 0; i < parts.size(); ++i) items.push_back(parts[i][ix[i]]);
        out.push_back(Value::tuple(std::move(items)));
        for (size_t i = parts.size(); i-- > 0;) {  // last component fastest
          if (++ix[i] < parts[i].size()) break;
          ix[i] = 0;
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }
    case Type::K::Fn: {
      std::vector<Value> keys = enumerate(Type::sort(t.name));
      std::vector<Value> vals = enumerate(t.elem());
      uint64_t total = pow_sat(vals.size(), keys.size());
      if (total > (uint64_t(1) << 24))
        throw std::invalid_argument("function type too large to enumerate");
      std::vector<Value> out;
      out.reserve(total);
      std::vector<size_t> ix(keys.size(), 0);
      for (uint64_t n = 0; n < total; ++n) {
        std::vector<Value> vv;
        vv.reserve(keys.size());
        for (size_t i = 0; i < keys.size(); ++i) vv.push_back(vals[ix[i]]);
        out.push_back(Value::fn(keys, std::move(vv)));
        for (size_t i = keys.size(); i-- > 0;) {
          if (++ix[i] < vals.size()) break;
          ix[i] = 0;
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }
  }
  throw std::invalid_argument("unhandled type");
}

uint64_t Instance::type_size(const Type& t) const {
  switch (t.k) {
    case Type::K::Bool:
      return 2;
    case Type::K::Sort: {
      auto si = sort_index(t.name);
      if (!si) throw std::invalid_argument("unknown sort '" + t.name + "'");
      return sorts[*si].elems.size();
    }
    case Type::K::Int:
      throw std::invalid_argument("unbounded integers have no size");
    case Type::K::IntRange: {
      auto it = ranges.find(t.name);
      if (it == ranges.end())
        throw std::invalid_argument("undefined integer range '" + t.name + "'");
      return uint64_t(it->second.second - it->second.first + 1);
    }
    case Type::K::Set: {
      uint64_t n = type_size(t.elem());
      if (n >= 63) return kSizeMax;
      return uint64_t(1) << n;
    }
    case Type::K::Tuple: {
      uint64_t r = 1;
      for (const auto& pt : t.args) r = mul_sat(r, type_size(pt));
      return r;
    }
    case Type::K::Fn:
      return pow_sat(type_size(t.elem()), type_size(Type::sort(t.name)));
  }
  throw std::invalid_argument("unhandled type");
}

std::string Instance::pretty() const {
  std::ostringstream out;
  auto resolver = [this](uint32_t s, uint32_t e) { return atom_name(s, e); };
  for (const auto& s : sorts) {
    out << "sort " << s.name << " = {";
    for (size_t i = 0; i < s.elems.size(); ++i) {
      if (i) out << ", ";
      out << s.elems[i];
    }
    out << "}\n";
  }
  std::map<std::string, const Value*> by_name;
  for (const auto& [n, v] : consts) by_name.emplace(n, &v);
  for (const auto& [n, v] : by_name) out << "const " << n << " = " << v->to_string(resolver) << "\n";
  std::map<std::string, std::pair<int64_t, int64_t>> rs(ranges.begin(), ranges.end());
  for (const auto& [n, b] : rs)
    out << "intrange " << n << " " << b.first << " " << b.second << "\n";
  return out.str();
}

uint64_t Instance::content_hash() const { return fnv1a64(pretty()); }

namespace {

bool value_has_type(const Value& v, const Type& t, const Instance& inst) {
  switch (t.k) {
    case Type::K::Bool:
      return v.kind() == Value::Kind::Bool;
    case Type::K::Sort: {
      auto si = inst.sort_index(t.name);
      return si && v.kind() == Value::Kind::Atom && v.atom_sort() == *si;
    }
    case Type::K::Int:
      return v.kind() == Value::Kind::Int;
    case Type::K::IntRange: {
      auto it = inst.ranges.find(t.name);
      return it != inst.ranges.end() && v.kind() == Value::Kind::Int &&
             v.as_int() >= it->second.first && v.as_int() <= it->second.second;
    }
    case Type::K::Set: {
      if (v.kind() != Value::Kind::Set) return false;
      for (const auto& m : v.items())
        if (!value_has_type(m, t.elem(), inst)) return false;
      return true;
    }
    case Type::K::Tuple: {
      if (v.kind() != Value::Kind::Tuple || v.size() != t.args.size()) return false;
      for (size_t i = 0; i < t.args.size(); ++i)
        if (!value_has_type(v.items()[i], t.args[i], inst)) return false;
      return true;
    }
    case Type::K::Fn: {
      if (v.kind() != Value::Kind::Fn) return false;
      auto si = inst.sort_index(t.name);
      if (!si || v.fn_size() != inst.sort(*si).elems.size()) return false;
      for (size_t i = 0; i < v.fn_size(); ++i) {
        const Value& k = v.fn_key(i);
        if (k.kind() != Value::Kind::Atom || k.atom_sort() != *si ||
            k.atom_elem() != i)
          return false;  // total function: keys are exactly the sort's atoms
        if (!value_has_type(v.fn_val(i), t.elem(), inst)) return false;
      }
      return true;
    }
  }
  return false;
}

void collect_range_names(const Type& t, std::vector<std::string>& out) {
  if (t.k == Type::K::IntRange) out.push_back(t.name);
  for (const auto& a : t.args) collect_range_names(a, out);
}

void check_atom_literals(const Expr& e, const Instance& inst,
                         const TransitionSystem& sys) {
  if (!e) return;
  if (e->op == ExprNode::Op::AtomLit) {
    auto a = inst.atom(e->name);
    if (!a)
      throw ParseError("<instance>", e->span,
                       "'" + e->name + "' is not an element of any sort in this instance");
    auto want = sys.sort_index(e->type.name);
    if (!want || a->first != *want)
      throw ParseError("<instance>", e->span,
                       "'" + e->name + "' is an element of sort '" +
                           inst.sort(a->first).name + "', not '" + e->type.name + "'");
  }
  for (const auto& c : e->children) check_atom_literals(c, inst, sys);
}

}  // namespace

void Instance::validate(const TransitionSystem& sys) const {
  auto fail = [](const std::string& msg) { throw ParseError("<instance>", {1, 1}, msg); };

  if (sorts.size() != sys.sorts.size()) fail("instance sort list does not match protocol");
  std::unordered_set<std::string> elem_names;
  for (size_t i = 0; i < sorts.size(); ++i) {
    if (sorts[i].name != sys.sorts[i]) fail("instance sort list does not match protocol");
    if (sorts[i].elems.empty()) fail("sort '" + sorts[i].name + "' is empty");
    for (const auto& e : sorts[i].elems) {
      if (!elem_names.insert(e).second)
        fail("sort element '" + e + "' is declared twice");
      if (sys.var_index(e) || sys.const_decl(e) || sys.sort_index(e))
        fail("sort element '" + e + "' collides with a declared name");
    }
  }

  std::vector<std::string> range_names;
  for (const auto& c : sys.consts) collect_range_names(c.type, range_names);
  for (const auto& v : sys.vars) collect_range_names(v.type, range_names);
  for (const auto& r : range_names) {
    auto it = ranges.find(r);
    if (it == ranges.end()) fail("instance does not define integer range '" + r + "'");
    if (it->second.first > it->second.second)
      fail("integer range '" + r + "' is empty");
  }

  for (const auto& c : sys.consts) {
    auto it = consts.find(c.name);
    if (it == consts.end()) fail("instance does not define constant '" + c.name + "'");
    if (!value_has_type(it->second, c.type, *this))
      fail("constant '" + c.name + "' does not have its declared type " + c.type.to_string());
  }

  for (const auto& cl : sys.inits) check_atom_literals(cl.expr, *this, sys);
  for (const auto& a : sys.actions) {
    check_atom_literals(a.require, *this, sys);
    for (const auto& [_, rhs] : a.updates) check_atom_literals(rhs, *this, sys);
  }
  for (const auto& l : sys.lemmas) check_atom_literals(l.body, *this, sys);
}

}  // namespace gapslice
