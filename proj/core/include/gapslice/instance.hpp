// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_INSTANCE_HPP
#define GAPSLICE_INSTANCE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gapslice/system.hpp"
#include "gapslice/value.hpp"

namespace gapslice {

/// A finite instantiation of a protocol's symbolic declarations: concrete
/// elements for every sort, a value for every constant, and bounds for
/// every integer range. Produced by parse_instance, already validated
/// against (and bound to) its TransitionSystem: sort indices used inside
/// atom values follow the system's sort declaration order.
class Instance {
 public:
  struct SortDef {
    std::string name;
    std::vector<std::string> elems;
  };

  std::vector<SortDef> sorts;  // aligned with TransitionSystem::sorts
  std::unordered_map<std::string, Value> consts;
  std::unordered_map<std::string, std::pair<int64_t, int64_t>> ranges;

  const SortDef& sort(uint32_t ix) const { return sorts[ix]; }
  std::optional<uint32_t> sort_index(const std::string& n) const;

  /// Looks up a sort element by name; returns (sort index, element index).
  std::optional<std::pair<uint32_t, uint32_t>> atom(const std::string& elem) const;
  std::string atom_name(uint32_t sort, uint32_t elem) const;

  /// All values of a type, in canonical value order. Sorts enumerate their
  /// atoms; ranges their integers; sets/tuples/functions the full cross
  /// product (used by quantifier evaluation via sorts/constants, and by the
  /// type-correct state space enumerator).
  std::vector<Value> enumerate(const Type& t) const;

  /// Number of values of the type, saturating at 2^63-1.
  uint64_t type_size(const Type& t) const;

  /// Canonical source rendering (name-sorted); content hash input.
  std::string pretty() const;
  uint64_t content_hash() const;

  /// Checks this instance against `sys`: every sort/constant/range declared
  /// by the system is defined, sorts are nonempty with distinct elements,
  /// constant values match their declared types, ranges are non-empty, and
  /// every atom literal mentioned in the spec names an element. Throws
  /// ParseError on violations. Called by parse_instance.
  void validate(const TransitionSystem& sys) const;

 private:
  mutable std::unordered_map<std::string, std::pair<uint32_t, uint32_t>> atom_ix_;
  void build_atom_index() const;
};

}  // namespace gapslice

#endif  // GAPSLICE_INSTANCE_HPP
