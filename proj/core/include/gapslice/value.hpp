// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_VALUE_HPP
#define GAPSLICE_VALUE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "gapslice/util/bytes.hpp"

namespace gapslice {

/// Runtime values of the protocol state language.
///
/// A value is one of: boolean, bounded integer, atom (an element of a
/// declared sort), tuple, finite set, or finite function. Values are
/// immutable; compound values share their payload, so copying a State is
/// cheap and "updating" a function produces a fresh value.
///
/// Values are totally ordered. The order is used for the canonical form of
/// sets and function domains, for the canonical byte encoding of states,
/// and for every tie-break that must not depend on hash or insertion order:
///   booleans < integers < atoms < tuples < sets < functions,
/// booleans by false < true, integers numerically, atoms by (sort index,
/// element index), and compound values by (size, lexicographic) over the
/// already-canonical element order.
class Value {
 public:
  enum class Kind : uint8_t { Bool = 0, Int = 1, Atom = 2, Tuple = 3, Set = 4, Fn = 5 };

  Value() : kind_(Kind::Bool), scalar_(0) {}

  static Value boolean(bool b);
  static Value integer(int64_t i);
  static Value atom(uint32_t sort, uint32_t elem);
  static Value tuple(std::vector<Value> items);
  /// Builds a set; items are sorted and deduplicated here.
  static Value set(std::vector<Value> items);
  /// Builds a function from parallel key/value vectors; keys are sorted
  /// (carrying their values along) and must be distinct.
  static Value fn(std::vector<Value> keys, std::vector<Value> vals);

  Kind kind() const { return kind_; }
  bool as_bool() const { return scalar_ != 0; }
  int64_t as_int() const { return static_cast<int64_t>(scalar_); }
  uint32_t atom_sort() const { return static_cast<uint32_t>(scalar_ >> 32); }
  uint32_t atom_elem() const { return static_cast<uint32_t>(scalar_); }

  /// Tuple items, set elements (canonical order), or function keys+values
  /// interleaved as k0,v0,k1,v1,...
  const std::vector<Value>& items() const { return *items_; }
  size_t size() const { return items_->size(); }
  size_t fn_size() const { return items_->size() / 2; }
  const Value& fn_key(size_t i) const { return (*items_)[2 * i]; }
  const Value& fn_val(size_t i) const { return (*items_)[2 * i + 1]; }

  /// Set membership by binary search over the canonical element order.
  bool set_contains(const Value& v) const;
  /// Function application; throws EvalError-compatible runtime_error if the
  /// key is not in the domain (a type-correct program never does this).
  const Value& fn_apply(const Value& key) const;
  /// Function with one point replaced. Key must already be in the domain.
  Value fn_update(const Value& key, Value val) const;

  /// Total canonical order: negative/zero/positive like memcmp.
  int compare(const Value& o) const;
  bool operator==(const Value& o) const { return compare(o) == 0; }
  bool operator!=(const Value& o) const { return compare(o) != 0; }
  bool operator<(const Value& o) const { return compare(o) < 0; }

  /// Appends the canonical byte encoding (self-describing, varint-based).
  void encode(Bytes& out) const;
  static Value decode(ByteReader& in);

  /// Renders the value; sort element names are resolved through `atom_name`
  /// (falls back to "s<i>#<j>" when empty).
  std::string to_string(
      const std::function<std::string(uint32_t, uint32_t)>& atom_name = {}) const;

 private:
  Kind kind_;
  uint64_t scalar_;  // Bool: 0/1; Int: int64 bits; Atom: sort<<32 | elem.
  std::shared_ptr<const std::vector<Value>> items_;
};

}  // namespace gapslice

#endif  // GAPSLICE_VALUE_HPP
