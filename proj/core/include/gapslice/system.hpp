// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_SYSTEM_HPP
#define GAPSLICE_SYSTEM_HPP

#include <optional>
#include <string>
#include <vector>

#include "gapslice/expr.hpp"
#include "gapslice/types.hpp"

namespace gapslice {

struct ConstDecl {
  std::string name;
  Type type;
};

struct VarDecl {
  std::string name;
  Type type;
};

/// One `x = e` or `x in e` clause of the init block. A `=` clause pins the
/// variable; an `in` clause picks nondeterministically from the members of
/// the (constant) set expression, so the initial-state set is the cross
/// product of the choices.
struct InitClause {
  uint32_t var = 0;
  bool choice = false;
  Expr expr;
};

/// An action parameter `p : D` where D is a sort or a set-valued constant.
struct Param {
  std::string name;
  std::string domain;
  bool domain_is_const = false;
  Type type;          // element type, filled in by the type checker
  uint32_t slot = 0;  // evaluation frame slot
};

/// A guarded action: all updates are evaluated against the pre-state, and
/// variables without an update clause are carried over unchanged.
struct ActionDecl {
  std::string name;
  std::vector<Param> params;
  Expr require;  // null means `true`
  std::vector<std::pair<uint32_t, Expr>> updates;  // (variable index, rhs)

  bool writes(uint32_t var) const {
    for (const auto& [v, _] : updates)
      if (v == var) return true;
    return false;
  }
};

struct LemmaDecl {
  std::string name;
  Expr body;
};

/// A parsed and type-checked protocol: sorts and constants are symbolic
/// (their contents come from an Instance), variables/actions/lemmas are
/// concrete syntax trees annotated with types and variable indices.
class TransitionSystem {
 public:
  std::string name;
  std::vector<std::string> sorts;
  std::vector<ConstDecl> consts;
  std::vector<VarDecl> vars;
  std::vector<InitClause> inits;
  std::vector<ActionDecl> actions;
  std::vector<LemmaDecl> lemmas;

  /// Resolves names, assigns variable indices and binder slots, and checks
  /// types. Throws ParseError (with a source span) on any failure. Called by
  /// parse_spec; idempotent. `filename` appears in diagnostics only.
  void typecheck(const std::string& filename = "<spec>");

  std::optional<uint32_t> var_index(const std::string& n) const;
  std::optional<uint32_t> sort_index(const std::string& n) const;
  const ConstDecl* const_decl(const std::string& n) const;
  std::optional<uint32_t> action_index(const std::string& n) const;
  const LemmaDecl* lemma(const std::string& n) const;

  /// Variable indices in canonical (name-sorted) order. State encodings and
  /// projection keys use this order, so they are independent of declaration
  /// order in the source file.
  const std::vector<uint32_t>& encoding_order() const { return enc_order_; }

  /// Canonical source rendering; re-parses to an equal system. Content
  /// hashes of specs are taken over this form, so formatting and comments
  /// do not invalidate caches.
  std::string pretty() const;

  /// FNV-1a over pretty(); identifies the spec in cache and graph files.
  uint64_t content_hash() const;

 private:
  std::vector<uint32_t> enc_order_;
};

}  // namespace gapslice

#endif  // GAPSLICE_SYSTEM_HPP
