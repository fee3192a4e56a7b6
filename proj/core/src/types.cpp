// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/types.hpp"

#include <sstream>

namespace gapslice {

std::string Type::to_string() const {
  std::ostringstream os;
  switch (k) {
    case K::Bool:
      os << "bool";
      break;
    case K::Sort:
      os << name;
      break;
    case K::Int:
      os << "int";
      break;
    case K::IntRange:
      os << "int " << name;
      break;
    case K::Set:
      os << "set of " << elem().to_string();
      break;
    case K::Tuple: {
      os << "tuple(";
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ", ";
        os << args[i].to_string();
      }
      os << ")";
      break;
    }
    case K::Fn:
      os << "fn " << name << " -> " << elem().to_string();
      break;
  }
  return os.str();
}

bool unify(const Type& a, const Type& b, Type* out) {
  // Int unifies with any IntRange; the ranged side is the more specific.
  if ((a.k == Type::K::Int && (b.k == Type::K::Int || b.k == Type::K::IntRange)) ||
      (a.k == Type::K::IntRange && b.k == Type::K::Int)) {
    if (out) *out = (a.k == Type::K::IntRange) ? a : b;
    return true;
  }
  if (a.k != b.k || a.name != b.name || a.args.size() != b.args.size()) return false;
  Type merged = a;
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (!unify(a.args[i], b.args[i], out ? &merged.args[i] : nullptr)) return false;
  }
  if (out) *out = std::move(merged);
  return true;
}

}  // namespace gapslice
