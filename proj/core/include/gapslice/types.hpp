// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_TYPES_HPP
#define GAPSLICE_TYPES_HPP

#include <string>
#include <vector>

namespace gapslice {

/// Static types of the protocol language.
///
/// `Int` is the type of integer literals and arithmetic results; it unifies
/// with any named `IntRange`. Range membership is enforced at evaluation
/// time (assigning an out-of-range integer to a ranged variable is an
/// evaluation error, not a type error).
struct Type {
  enum class K { Bool, Sort, Int, IntRange, Set, Tuple, Fn };

  K k = K::Bool;
  std::string name;        // Sort / IntRange: declared name; Fn: domain sort name.
  std::vector<Type> args;  // Set: [element]; Tuple: components; Fn: [codomain].

  static Type boolean() { return {K::Bool, "", {}}; }
  static Type sort(std::string n) { return {K::Sort, std::move(n), {}}; }
  static Type integer() { return {K::Int, "", {}}; }
  static Type int_range(std::string n) { return {K::IntRange, std::move(n), {}}; }
  static Type set_of(Type elem) { return {K::Set, "", {std::move(elem)}}; }
  static Type tuple_of(std::vector<Type> parts) { return {K::Tuple, "", std::move(parts)}; }
  static Type fn_of(std::string domain_sort, Type codomain) {
    return {K::Fn, std::move(domain_sort), {std::move(codomain)}};
  }

  const Type& elem() const { return args[0]; }

  bool operator==(const Type& o) const {
    return k == o.k && name == o.name && args == o.args;
  }
  bool operator!=(const Type& o) const { return !(*this == o); }

  std::string to_string() const;
};

/// Structural compatibility with Int/IntRange unification. On success the
/// more specific of the two types is written to `out` (if non-null).
bool unify(const Type& a, const Type& b, Type* out = nullptr);

}  // namespace gapslice

#endif  // GAPSLICE_TYPES_HPP
