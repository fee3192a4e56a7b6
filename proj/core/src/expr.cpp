// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/expr.hpp"

#include <algorithm>
#include <sstream>

namespace gapslice {

Expr make_expr(ExprNode::Op op, SourceSpan span) {
  return std::make_shared<ExprNode>(op, span);
}

namespace {

using Op = ExprNode::Op;

// Binding tightness, loosest first. Mirrors the parser's expression ladder:
// quantifiers < => < \/ < /\ < ~ < comparisons < with-update < set ops and
// additive < application < primary.
int level_of(const ExprNode& e) {
  switch (e.op) {
    case Op::Forall:
    case Op::Exists:
      return 0;
    case Op::Implies:
      return 1;
    case Op::Or:
      return 2;
    case Op::And:
      return 3;
    case Op::Not:
      return 4;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::In:
    case Op::NotIn:
    case Op::Subseteq:
      return 5;
    case Op::FnUpdate:
      return 6;
    case Op::Union:
    case Op::Intersect:
    case Op::Setminus:
    case Op::Add:
    case Op::Sub:
      return 7;
    case Op::FnApp:
      return 8;
    default:
      return 9;
  }
}

const char* infix_token(Op op) {
  switch (op) {
    case Op::Implies: return "=>";
    case Op::Or: return "\\/";
    case Op::And: return "/\\";
    case Op::Eq: return "=";
    case Op::Ne: return "!=";
    case Op::Lt: return "<";
    case Op::Le: return "<=";
    case Op::Gt: return ">";
    case Op::Ge: return ">=";
    case Op::In: return "in";
    case Op::NotIn: return "notin";
    case Op::Subseteq: return "subseteq";
    case Op::Union: return "cup";
    case Op::Intersect: return "cap";
    case Op::Setminus: return "setminus";
    case Op::Add: return "+";
    case Op::Sub: return "-";
    default: return "?";
  }
}

void print_binders(std::ostringstream& os, const std::vector<Binder>& bs) {
  for (size_t i = 0; i < bs.size(); ++i) {
    if (i) os << ", ";
    os << bs[i].var << " in " << bs[i].domain;
  }
}

void print(std::ostringstream& os, const ExprNode& e, int min_level);

void print_child(std::ostringstream& os, const ExprNode& e, int min_level) {
  if (level_of(e) < min_level) {
    os << "(";
    print(os, e, 0);
    os << ")";
  } else {
    print(os, e, 0);
  }
}

void print(std::ostringstream& os, const ExprNode& e, int) {
  switch (e.op) {
    case Op::BoolLit:
      os << (e.bval ? "true" : "false");
      break;
    case Op::IntLit:
      os << e.ival;
      break;
    case Op::AtomLit:
    case Op::VarRef:
    case Op::ParamRef:
    case Op::ConstRef:
    case Op::SortSetRef:
      os << e.name;
      if (e.op == Op::VarRef && e.primed) os << "'";
      break;
    case Op::Not:
      os << "~";
      print_child(os, *e.children[0], 5);
      break;
    case Op::And:
    case Op::Or: {
      int lvl = level_of(e);
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << " " << infix_token(e.op) << " ";
        print_child(os, *e.children[i], lvl + 1);
      }
      break;
    }
    case Op::Implies:
      print_child(os, *e.children[0], 2);
      os << " => ";
      print_child(os, *e.children[1], 1);
      break;
    case Op::Eq:
    case Op::Ne:
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge:
    case Op::In:
    case Op::NotIn:
    case Op::Subseteq:
      print_child(os, *e.children[0], 6);
      os << " " << infix_token(e.op) << " ";
      print_child(os, *e.children[1], 6);
      break;
    case Op::FnUpdate:
      print_child(os, *e.children[0], 6);
      os << " with [";
      print(os, *e.children[1], 0);
      os << "] := ";
      print_child(os, *e.children[2], 7);
      break;
    case Op::Union:
    case Op::Intersect:
    case Op::Setminus:
    case Op::Add:
    case Op::Sub:
      print_child(os, *e.children[0], 7);
      os << " " << infix_token(e.op) << " ";
      print_child(os, *e.children[1], 8);
      break;
    case Op::FnApp:
      print_child(os, *e.children[0], 8);
      os << "[";
      print(os, *e.children[1], 0);
      os << "]";
      break;
    case Op::SetEnum: {
      os << "{";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.children[i], 0);
      }
      os << "}";
      break;
    }
    case Op::SetComp:
      os << "{ " << e.binders[0].var << " in " << e.binders[0].domain << " : ";
      print(os, *e.children[0], 0);
      os << " }";
      break;
    case Op::TupleExpr: {
      os << "<<";
      for (size_t i = 0; i < e.children.size(); ++i) {
        if (i) os << ", ";
        print(os, *e.children[i], 0);
      }
      os << ">>";
      break;
    }
    case Op::FnLit:
      os << "[" << e.binders[0].var << " in " << e.binders[0].domain << " |-> ";
      print(os, *e.children[0], 0);
      os << "]";
      break;
    case Op::Forall:
    case Op::Exists:
      os << (e.op == Op::Forall ? "forall " : "exists ");
      print_binders(os, e.binders);
      os << " : ";
      print_child(os, *e.children[0], 0);
      break;
  }
}

void collect_vars_rec(const ExprNode& e, std::vector<uint32_t>& unprimed,
                      std::vector<uint32_t>& primed) {
  if (e.op == ExprNode::Op::VarRef) {
    (e.primed ? primed : unprimed).push_back(e.var);
  }
  for (const auto& c : e.children) collect_vars_rec(*c, unprimed, primed);
}

void sort_unique(std::vector<uint32_t>& xs) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
}

}  // namespace

std::string expr_to_string(const ExprNode& e) {
  std::ostringstream os;
  print(os, e, 0);
  return os.str();
}

void collect_vars(const ExprNode& e, std::vector<uint32_t>& unprimed,
                  std::vector<uint32_t>& primed) {
  collect_vars_rec(e, unprimed, primed);
  sort_unique(unprimed);
  sort_unique(primed);
}

}  // namespace gapslice
