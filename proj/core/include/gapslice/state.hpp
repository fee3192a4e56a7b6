// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_STATE_HPP
#define GAPSLICE_STATE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gapslice/system.hpp"
#include "gapslice/value.hpp"

namespace gapslice {

class Instance;

/// A full protocol state: one value per declared variable, indexed by the
/// system's variable index (declaration order).
struct State {
  std::vector<Value> v;

  bool operator==(const State& o) const { return v == o.v; }
};

/// A deduplicated set of states over a fixed variable subset (the schema).
/// Full reachable sets use all variables; projections use a subset. The
/// schema is kept in canonical (name-sorted) order, so two sets over the
/// same variables always agree on layout and encodings.
///
/// Rows are stored in insertion order; `canonical_order()` gives the
/// permutation sorted by encoding, which is the order used by save() and by
/// every consumer that needs an order independent of exploration order.
class StateSet {
 public:
  StateSet() = default;
  /// Schema over `vars` (system variable indices; any order, stored sorted
  /// by name).
  StateSet(const TransitionSystem& sys, std::vector<uint32_t> vars);

  /// Full-state schema helper.
  static StateSet full(const TransitionSystem& sys);

  const std::vector<uint32_t>& schema() const { return schema_; }
  const std::vector<std::string>& schema_names() const { return schema_names_; }
  const std::vector<Type>& schema_types() const { return schema_types_; }
  size_t width() const { return schema_.size(); }
  size_t size() const { return count_; }

  /// Column of system variable `var` in this schema, or -1.
  int32_t col_of(uint32_t var) const {
    return var < var_to_col_.size() ? var_to_col_[var] : -1;
  }
  const std::vector<int32_t>& col_map() const { return var_to_col_; }

  /// Inserts the projection of a full state. Returns (row id, was new).
  std::pair<uint32_t, bool> insert(const State& s);
  /// Inserts a row already in schema layout.
  std::pair<uint32_t, bool> insert_row(const Value* row);

  /// Row access: `row(i)[c]` is the value of schema column c.
  const Value* row(uint32_t i) const { return rows_.data() + size_t(i) * width(); }
  std::string_view encoding(uint32_t i) const;
  std::optional<uint32_t> find_encoding(std::string_view enc) const;

  /// Row ids sorted by canonical encoding bytes.
  std::vector<uint32_t> canonical_order() const;

  /// Serialization. The on-disk format is versioned by its magic ("GAPR1"),
  /// records the spec/instance content hashes and the schema, stores states
  /// sorted by encoding, and ends with a checksum; load() verifies all of
  /// them (pass nullopt to skip a hash check). Errors throw CacheError.
  void save(const std::string& path, uint64_t spec_hash, uint64_t inst_hash) const;
  static StateSet load(const std::string& path, const TransitionSystem& sys,
                       std::optional<uint64_t> spec_hash,
                       std::optional<uint64_t> inst_hash);

 private:
  std::vector<uint32_t> schema_;
  std::vector<std::string> schema_names_;
  std::vector<Type> schema_types_;
  std::vector<int32_t> var_to_col_;

  std::vector<Value> rows_;  // count_ * width() values
  size_t count_ = 0;
  std::vector<Value> scratch_;  // insert()'s projection buffer

  // Encodings are kept in one arena; offsets_[i]..offsets_[i+1] is row i.
  std::vector<uint8_t> enc_arena_;
  std::vector<uint64_t> offsets_{0};
  std::unordered_map<uint64_t, std::vector<uint32_t>> index_;  // hash -> row ids

  std::pair<uint32_t, bool> insert_encoded(const Value* row, const Bytes& enc);
};

class CacheError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gapslice

#endif  // GAPSLICE_STATE_HPP
