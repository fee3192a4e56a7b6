// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_EXPR_HPP
#define GAPSLICE_EXPR_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "gapslice/types.hpp"

namespace gapslice {

/// Location of a token or expression in its source file (1-based).
struct SourceSpan {
  uint32_t line = 0;
  uint32_t col = 0;
};

struct ExprNode;
/// Expressions are immutable after the type-check pass and shared freely.
using Expr = std::shared_ptr<ExprNode>;

/// A quantifier binding `x in D` where D is a sort or a set-valued constant
/// (quantifying over the members of the constant's value).
struct Binder {
  std::string var;
  std::string domain;
  bool domain_is_const = false;
  Type type;           // element type; filled in by the type checker
  uint32_t slot = 0;   // frame slot used by the evaluator
};

struct ExprNode {
  enum class Op : uint8_t {
    BoolLit,    // bval
    IntLit,     // ival
    AtomLit,    // name (element); type.name = sort, resolved by checker
    VarRef,     // name, var (state variable index), primed
    ParamRef,   // name, slot (action parameter / quantifier binding)
    ConstRef,   // name
    SortSetRef, // name (a sort used as a set expression)
    Not,
    And,        // n-ary
    Or,         // n-ary
    Implies,    // binary, right-assoc
    Eq, Ne, Lt, Le, Gt, Ge,
    In, NotIn, Subseteq,
    Union, Intersect, Setminus,
    Add, Sub,
    SetEnum,     // children are the elements
    SetComp,     // { x in S : children[0] }, binders[0]
    TupleExpr,   // << children... >>
    FnApp,       // children[0] [ children[1] ]
    FnLit,       // [ x in S |-> children[0] ], binders[0]
    FnUpdate,    // children[0] with [ children[1] ] := children[2]
    Forall,      // binders..., children[0]
    Exists,      // binders..., children[0]
  };

  Op op;
  SourceSpan span;
  std::vector<Expr> children;
  std::vector<Binder> binders;

  // Literal / reference payloads.
  bool bval = false;
  int64_t ival = 0;
  std::string name;
  uint32_t var = 0;     // VarRef: state variable index
  uint32_t slot = 0;    // ParamRef: evaluation frame slot
  bool primed = false;  // VarRef: refers to the post-state

  Type type;  // filled in by the type checker

  ExprNode(Op o, SourceSpan s) : op(o), span(s) {}
};

Expr make_expr(ExprNode::Op op, SourceSpan span);

/// Renders an expression in source syntax (ASCII operator spellings, minimal
/// parentheses). The output re-parses to an identical tree; graph files and
/// reports rely on that round trip.
std::string expr_to_string(const ExprNode& e);
inline std::string expr_to_string(const Expr& e) { return expr_to_string(*e); }

/// Names of unprimed / primed state variables referenced anywhere below `e`,
/// as system variable indices (deduplicated, ascending).
void collect_vars(const ExprNode& e, std::vector<uint32_t>& unprimed,
                  std::vector<uint32_t>& primed);

}  // namespace gapslice

#endif  // GAPSLICE_EXPR_HPP
