// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_PARSER_HPP
#define GAPSLICE_PARSER_HPP

#include <stdexcept>
#include <string>
#include <string_view>

#include "gapslice/expr.hpp"
#include "gapslice/grammar.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

/// Parse or type error with a source position. `what()` is a ready-to-print
/// diagnostic of the form `file:line:col: message`.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string file, SourceSpan span, const std::string& message);
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// Parses and type-checks a protocol definition (.gap). `filename` is used
/// in diagnostics only.
TransitionSystem parse_spec(std::string_view text, const std::string& filename = "<spec>");

/// Parses a synthesis grammar (.grm) and type-checks every predicate under
/// its templates' bindings against `sys`.
Grammar parse_grammar(std::string_view text, const TransitionSystem& sys,
                      const std::string& filename = "<grammar>");

/// Parses a finite instance (.inst), binds it to `sys` (sort order, atom
/// resolution) and validates it.
Instance parse_instance(std::string_view text, const TransitionSystem& sys,
                        const std::string& filename = "<instance>");

/// Parses a single expression against a system (used by graph-file import,
/// the round-trip tests and ad-hoc queries). `binders`, if non-null, gives
/// names/types for free occurrences of quantifier-bound variables.
Expr parse_lemma_body(std::string_view text, const TransitionSystem& sys,
                      const std::string& filename = "<expr>");

}  // namespace gapslice

#endif  // GAPSLICE_PARSER_HPP
