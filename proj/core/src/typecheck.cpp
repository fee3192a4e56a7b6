// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/typecheck.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "gapslice/eval.hpp"
#include "gapslice/parser.hpp"

namespace gapslice::detail {
namespace {

/// Thrown when an expression's type cannot be inferred bottom-up (empty set
/// literal, bare sort-element name) and no expected type was supplied. The
/// enclosing operator retries the sibling side first; if it escapes to the
/// top it becomes a ParseError.
struct NeedsContext {
  SourceSpan span;
  std::string what;
};

class Checker {
 public:
  Checker(const TransitionSystem& sys, std::string file)
      : sys_(sys), file_(std::move(file)) {}

  bool allow_state_vars = true;

  void push_param(const std::string& name, const Type& elem) {
    scope_.push_back({name, elem});
  }

  /// Resolves a binder's domain (sort, or set-valued constant quantified
  /// over its members), fills in its element type and slot, and opens a
  /// scope entry for it.
  void push_binder(Binder& b, SourceSpan span) {
    if (sys_.sort_index(b.domain)) {
      b.domain_is_const = false;
      b.type = Type::sort(b.domain);
    } else if (const ConstDecl* c = sys_.const_decl(b.domain)) {
      if (c->type.k != Type::K::Set)
        err(span, "binder domain '" + b.domain + "' is not a set-valued constant");
      b.domain_is_const = true;
      b.type = c->type.elem();
    } else {
      err(span, "unknown binder domain '" + b.domain + "' (not a sort or constant)");
    }
    b.slot = static_cast<uint32_t>(scope_.size());
    scope_.push_back({b.var, b.type});
  }

  void pop_scope(size_t n = 1) { scope_.resize(scope_.size() - n); }

  /// Type-checks `e`, resolving names and annotating nodes in place.
  /// Re-entrant: resolution always starts from the node's recorded name, so
  /// re-checking an already-annotated tree is harmless.
  Type check(Expr& e, const Type* expected) {
    Type t = check_inner(e, expected);
    if (expected && !unify(t, *expected, &t))
      err(e->span, "type mismatch: expected " + expected->to_string() + ", got " +
                       t.to_string());
    e->type = t;
    return t;
  }

 private:
  using Op = ExprNode::Op;

  Type check_inner(Expr& e, const Type* expected) {
    switch (e->op) {
      case Op::BoolLit:
        return Type::boolean();
      case Op::IntLit:
        return Type::integer();

      case Op::AtomLit:
      case Op::VarRef:
      case Op::ParamRef:
      case Op::ConstRef:
      case Op::SortSetRef:
        return resolve_name(e, expected);

      case Op::Not:
      case Op::And:
      case Op::Or:
      case Op::Implies: {
        Type b = Type::boolean();
        for (auto& c : e->children) check(c, &b);
        return b;
      }

      case Op::Eq:
      case Op::Ne: {
        bidirectional(e->children[0], e->children[1], e->span);
        return Type::boolean();
      }

      case Op::Lt:
      case Op::Le:
      case Op::Gt:
      case Op::Ge: {
        for (auto& c : e->children) {
          Type t = check(c, nullptr);
          if (t.k != Type::K::Int && t.k != Type::K::IntRange)
            err(c->span, "comparison operand must be an integer, got " + t.to_string());
        }
        return Type::boolean();
      }

      case Op::In:
      case Op::NotIn: {
        Expr& el = e->children[0];
        Expr& set = e->children[1];
        if (auto st = infer_opt(set)) {
          if (st->k != Type::K::Set)
            err(set->span, "right side of 'in' must be a set, got " + st->to_string());
          check(el, &st->elem());
        } else {
          Type et = check(el, nullptr);
          Type want = Type::set_of(et);
          check(set, &want);
        }
        return Type::boolean();
      }

      case Op::Subseteq: {
        Type t = bidirectional(e->children[0], e->children[1], e->span);
        if (t.k != Type::K::Set)
          err(e->span, "'subseteq' operands must be sets, got " + t.to_string());
        return Type::boolean();
      }

      case Op::Union:
      case Op::Intersect:
      case Op::Setminus: {
        Type t;
        if (expected && expected->k == Type::K::Set) {
          check(e->children[0], expected);
          check(e->children[1], expected);
          t = *expected;
        } else {
          t = bidirectional(e->children[0], e->children[1], e->span);
        }
        if (t.k != Type::K::Set)
          err(e->span, "set operator applied to " + t.to_string());
        return t;
      }

      case Op::Add:
      case Op::Sub: {
        for (auto& c : e->children) {
          Type t = check(c, nullptr);
          if (t.k != Type::K::Int && t.k != Type::K::IntRange)
            err(c->span, "arithmetic operand must be an integer, got " + t.to_string());
        }
        return Type::integer();
      }

      case Op::SetEnum: {
        if (e->children.empty()) {
          if (!expected) throw NeedsContext{e->span, "empty set literal"};
          if (expected->k != Type::K::Set)
            err(e->span, "empty set literal where " + expected->to_string() + " expected");
          return *expected;
        }
        const Type* elem_exp = nullptr;
        Type elem_exp_store;
        if (expected && expected->k == Type::K::Set) {
          elem_exp_store = expected->elem();
          elem_exp = &elem_exp_store;
        }
        Type et = check(e->children[0], elem_exp);
        for (size_t i = 1; i < e->children.size(); ++i) {
          Type ti = check(e->children[i], &et);
          unify(et, ti, &et);
        }
        return Type::set_of(et);
      }

      case Op::SetComp: {
        push_binder(e->binders[0], e->span);
        Type b = Type::boolean();
        try {
          check(e->children[0], &b);
        } catch (...) {
          pop_scope();
          throw;
        }
        Type elem = e->binders[0].type;
        pop_scope();
        return Type::set_of(elem);
      }

      case Op::TupleExpr: {
        std::vector<Type> parts;
        bool use_exp = expected && expected->k == Type::K::Tuple &&
                       expected->args.size() == e->children.size();
        for (size_t i = 0; i < e->children.size(); ++i)
          parts.push_back(check(e->children[i], use_exp ? &expected->args[i] : nullptr));
        return Type::tuple_of(std::move(parts));
      }

      case Op::FnApp: {
        Type ft = check(e->children[0], nullptr);
        if (ft.k != Type::K::Fn)
          err(e->children[0]->span, "indexing a non-function of type " + ft.to_string());
        Type dom = Type::sort(ft.name);
        check(e->children[1], &dom);
        return ft.elem();
      }

      case Op::FnLit: {
        Binder& b = e->binders[0];
        push_binder(b, e->span);
        if (b.domain_is_const) {
          pop_scope();
          err(e->span, "function literal domain must be a sort");
        }
        const Type* body_exp = nullptr;
        if (expected && expected->k == Type::K::Fn) {
          if (expected->name != b.domain) {
            pop_scope();
            err(e->span, "function literal over sort '" + b.domain + "' where fn " +
                             expected->name + " -> ... expected");
          }
          body_exp = &expected->elem();
        }
        Type body;
        try {
          body = check(e->children[0], body_exp);
        } catch (...) {
          pop_scope();
          throw;
        }
        pop_scope();
        return Type::fn_of(b.domain, std::move(body));
      }

      case Op::FnUpdate: {
        Type ft = check(e->children[0], expected && expected->k == Type::K::Fn
                                            ? expected
                                            : nullptr);
        if (ft.k != Type::K::Fn)
          err(e->children[0]->span, "'with' update on non-function of type " + ft.to_string());
        Type dom = Type::sort(ft.name);
        check(e->children[1], &dom);
        check(e->children[2], &ft.elem());
        return ft;
      }

      case Op::Forall:
      case Op::Exists: {
        size_t n = e->binders.size();
        for (auto& b : e->binders) push_binder(b, e->span);
        Type bt = Type::boolean();
        try {
          check(e->children[0], &bt);
        } catch (...) {
          pop_scope(n);
          throw;
        }
        pop_scope(n);
        return bt;
      }
    }
    err(e->span, "internal: unhandled expression kind");
    return Type::boolean();  // unreachable
  }

  /// Resolution order for a bare name: innermost scope entry, state
  /// variable, constant, sort (as a set expression), and finally a sort
  /// element literal, which needs an expected sort type.
  Type resolve_name(Expr& e, const Type* expected) {
    const std::string& n = e->name;
    for (size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i].name == n) {
        e->op = Op::ParamRef;
        e->slot = static_cast<uint32_t>(i);
        return scope_[i].type;
      }
    }
    if (auto vi = sys_.var_index(n)) {
      if (!allow_state_vars)
        err(e->span, "state variable '" + n + "' may not appear here");
      e->op = Op::VarRef;
      e->var = *vi;
      return sys_.vars[*vi].type;
    }
    if (const ConstDecl* c = sys_.const_decl(n)) {
      e->op = Op::ConstRef;
      return c->type;
    }
    if (sys_.sort_index(n)) {
      e->op = Op::SortSetRef;
      return Type::set_of(Type::sort(n));
    }
    // Sort element literal: the sort must come from context. Whether the
    // element exists is checked against the instance.
    if (expected && expected->k == Type::K::Sort) {
      e->op = Op::AtomLit;
      return *expected;
    }
    if (expected)
      err(e->span, "unknown name '" + n + "'");
    throw NeedsContext{e->span, "name '" + n + "'"};
  }

  /// Checks two sides that must have one common type, trying left first and
  /// falling back to right-then-left when the left side needs context.
  Type bidirectional(Expr& l, Expr& r, SourceSpan span) {
    if (auto lt = infer_opt(l)) {
      Type rt = check(r, &*lt);
      Type out;
      unify(*lt, rt, &out);
      return out;
    }
    Type rt = check(r, nullptr);  // NeedsContext here escapes: truly ambiguous
    Type ltc = check(l, &rt);
    Type out;
    unify(ltc, rt, &out);
    (void)span;
    return out;
  }

  std::optional<Type> infer_opt(Expr& e) {
    try {
      return check(e, nullptr);
    } catch (const NeedsContext&) {
      return std::nullopt;
    }
  }

  [[noreturn]] void err(SourceSpan span, const std::string& msg) const {
    throw ParseError(file_, span, msg);
  }

  struct ScopeEntry {
    std::string name;
    Type type;
  };

  const TransitionSystem& sys_;
  std::string file_;
  std::vector<ScopeEntry> scope_;
};

/// check() with NeedsContext converted to a diagnostic.
Type check_top(Checker& ck, Expr& e, const Type* expected, const std::string& file) {
  try {
    return ck.check(e, expected);
  } catch (const NeedsContext& nc) {
    throw ParseError(file, nc.span, "cannot infer the type of " + nc.what +
                                        "; add context (e.g. compare with a typed expression)");
  }
}

/// Free names of an expression: identifiers not bound by an enclosing
/// quantifier/comprehension/function-literal binder within `e` itself.
/// Resolution has not run yet, so every candidate is still an AtomLit.
void collect_free_names(const ExprNode& e, std::vector<std::string>& bound,
                        std::set<std::string>& out) {
  switch (e.op) {
    case ExprNode::Op::AtomLit:
    case ExprNode::Op::VarRef:
    case ExprNode::Op::ParamRef:
    case ExprNode::Op::ConstRef:
    case ExprNode::Op::SortSetRef:
      if (std::find(bound.begin(), bound.end(), e.name) == bound.end()) out.insert(e.name);
      return;
    default:
      break;
  }
  size_t pushed = 0;
  for (const auto& b : e.binders) {
    bound.push_back(b.var);
    ++pushed;
  }
  for (const auto& c : e.children) collect_free_names(*c, bound, out);
  bound.resize(bound.size() - pushed);
}

}  // namespace

void typecheck_grammar(Grammar& g, const TransitionSystem& sys,
                       const std::string& filename) {
  if (g.templates.size() > 32)
    throw ParseError(filename, {1, 1}, "at most 32 templates are supported");

  // Binder names claimed by any template: a free occurrence of one of these
  // in a predicate must be bound by the template the predicate is used
  // under (it never falls through to a sort-element literal).
  std::set<std::string> template_names;
  for (const auto& t : g.templates) {
    std::set<std::string> seen;
    for (const auto& en : t.entries)
      if (!seen.insert(en.binder.var).second)
        throw ParseError(filename, {1, 1},
                         "duplicate template binder '" + en.binder.var + "'");
    for (const auto& en : t.entries) template_names.insert(en.binder.var);
  }

  g.pred_vars.assign(g.preds.size(), {});
  g.pred_templates.assign(g.preds.size(), 0);

  Checker ck(sys, filename);

  // Resolve every template binder up front (domain, element type, slot =
  // position in its template) so candidate enumeration can rely on them
  // even for binders no predicate mentions.
  for (auto& t : g.templates) {
    for (auto& en : t.entries) ck.push_binder(en.binder, {1, 1});
    ck.pop_scope(t.entries.size());
  }
  for (size_t pi = 0; pi < g.preds.size(); ++pi) {
    Expr& pred = g.preds[pi];
    std::set<std::string> free;
    {
      std::vector<std::string> bound;
      collect_free_names(*pred, bound, free);
    }
    // (slot, type) assignment of the first fitting template; later fits
    // must agree or candidate enumeration would be ambiguous.
    bool have_first = false;
    std::vector<std::pair<uint32_t, Type>> first_slots;  // by template-name order

    for (size_t ti = 0; ti < g.templates.size(); ++ti) {
      QuantTemplate& t = g.templates[ti];
      bool fits = true;
      for (const auto& name : free) {
        if (!template_names.count(name)) continue;
        bool in_t = false;
        for (const auto& en : t.entries) in_t |= en.binder.var == name;
        if (!in_t) {
          fits = false;
          break;
        }
      }
      if (!fits) continue;

      size_t pushed = 0;
      for (auto& en : t.entries) {
        ck.push_binder(en.binder, pred->span);
        ++pushed;
      }
      Type b = Type::boolean();
      try {
        check_top(ck, pred, &b, filename);
      } catch (...) {
        ck.pop_scope(pushed);
        throw;
      }
      ck.pop_scope(pushed);

      std::vector<std::pair<uint32_t, Type>> slots;
      for (const auto& name : template_names) {
        for (const auto& en : t.entries)
          if (en.binder.var == name) slots.emplace_back(en.binder.slot, en.binder.type);
      }
      if (!have_first) {
        have_first = true;
        first_slots = slots;
      } else if (slots != first_slots) {
        throw ParseError(filename, pred->span,
                         "predicate fits several templates that disagree on binder "
                         "positions; make the templates consistent");
      }
      g.pred_templates[pi] |= 1u << ti;
    }

    if (!g.pred_templates[pi])
      throw ParseError(filename, pred->span,
                       "predicate fits no template (a free name is missing from "
                       "every template)");

    std::vector<uint32_t> unp, pr;
    collect_vars(*pred, unp, pr);
    g.pred_vars[pi] = std::move(unp);
  }
}

Instance bind_instance(
    std::vector<Instance::SortDef> sorts,
    std::vector<std::pair<std::string, Expr>> consts,
    std::vector<std::pair<std::string, std::pair<int64_t, int64_t>>> ranges,
    const TransitionSystem& sys, const std::string& filename) {
  Instance inst;

  // Sorts are stored in the system's declaration order regardless of their
  // order in the instance file.
  for (const auto& sname : sys.sorts) {
    auto it = std::find_if(sorts.begin(), sorts.end(),
                           [&](const auto& s) { return s.name == sname; });
    if (it == sorts.end())
      throw ParseError(filename, {1, 1}, "instance does not define sort '" + sname + "'");
    inst.sorts.push_back(std::move(*it));
    sorts.erase(it);
  }
  if (!sorts.empty())
    throw ParseError(filename, {1, 1},
                     "instance defines sort '" + sorts.front().name +
                         "' which the protocol does not declare");

  for (auto& [name, bounds] : ranges) {
    if (!inst.ranges.emplace(name, bounds).second)
      throw ParseError(filename, {1, 1}, "duplicate range '" + name + "'");
  }

  // Constants may reference sorts and previously defined constants; they
  // are type-checked against the declared constant types and evaluated
  // against the partially built instance.
  Checker ck(sys, filename);
  ck.allow_state_vars = false;
  for (auto& [name, expr] : consts) {
    const ConstDecl* decl = sys.const_decl(name);
    if (!decl)
      throw ParseError(filename, expr->span,
                       "instance defines constant '" + name +
                           "' which the protocol does not declare");
    if (inst.consts.count(name))
      throw ParseError(filename, expr->span, "duplicate constant '" + name + "'");
    check_top(ck, expr, &decl->type, filename);
    Env env(sys, inst);
    try {
      inst.consts.emplace(name, eval(*expr, env));
    } catch (const EvalError& ee) {
      throw ParseError(filename, ee.span(), ee.what());
    }
  }

  inst.validate(sys);
  return inst;
}

void typecheck_lemma_body(Expr& e, const TransitionSystem& sys,
                          const std::string& filename) {
  Checker ck(sys, filename);
  Type b = Type::boolean();
  check_top(ck, e, &b, filename);
}

// Defined here so the Checker stays internal; the public entry point is
// TransitionSystem::typecheck below.
void typecheck_system_impl(TransitionSystem& sys, const std::string& filename) {
  auto dup = [&](const std::string& what, const std::string& name) {
    throw ParseError(filename, {1, 1}, "duplicate " + what + " '" + name + "'");
  };

  {
    std::unordered_set<std::string> names;
    for (const auto& s : sys.sorts)
      if (!names.insert(s).second) dup("sort", s);
    for (const auto& c : sys.consts)
      if (!names.insert(c.name).second) dup("constant", c.name);
    for (const auto& v : sys.vars)
      if (!names.insert(v.name).second) dup("variable", v.name);
    std::unordered_set<std::string> actions, lemmas;
    for (const auto& a : sys.actions)
      if (!actions.insert(a.name).second) dup("action", a.name);
    for (const auto& l : sys.lemmas)
      if (!lemmas.insert(l.name).second) dup("lemma", l.name);
  }

  // Declared types must mention only known sorts and name their ranges.
  auto check_type_names = [&](const Type& t, auto&& self) -> void {
    if (t.k == Type::K::Sort && !sys.sort_index(t.name))
      throw ParseError(filename, {1, 1}, "unknown sort '" + t.name + "' in declaration");
    if (t.k == Type::K::Fn && !sys.sort_index(t.name))
      throw ParseError(filename, {1, 1},
                       "function domain '" + t.name + "' is not a declared sort");
    for (const auto& a : t.args) self(a, self);
  };
  for (const auto& c : sys.consts) check_type_names(c.type, check_type_names);
  for (const auto& v : sys.vars) check_type_names(v.type, check_type_names);

  Checker ck(sys, filename);

  // Init: exactly one clause per variable, no state reads on the right.
  {
    std::vector<int> seen(sys.vars.size(), 0);
    ck.allow_state_vars = false;
    for (auto& cl : sys.inits) {
      if (seen[cl.var]++)
        throw ParseError(filename, cl.expr->span,
                         "variable '" + sys.vars[cl.var].name + "' initialized twice");
      if (cl.choice) {
        Type want = Type::set_of(sys.vars[cl.var].type);
        check_top(ck, cl.expr, &want, filename);
      } else {
        check_top(ck, cl.expr, &sys.vars[cl.var].type, filename);
      }
    }
    ck.allow_state_vars = true;
    for (uint32_t i = 0; i < sys.vars.size(); ++i)
      if (!seen[i])
        throw ParseError(filename, {1, 1},
                         "variable '" + sys.vars[i].name + "' has no init clause");
  }

  for (auto& a : sys.actions) {
    std::unordered_set<std::string> pnames;
    for (auto& p : a.params) {
      if (!pnames.insert(p.name).second)
        dup("parameter", p.name + "' in action '" + a.name);
      // Parameter domains resolve exactly like binder domains.
      Binder b;
      b.var = p.name;
      b.domain = p.domain;
      ck.push_binder(b, {1, 1});
      p.domain_is_const = b.domain_is_const;
      p.type = b.type;
      p.slot = b.slot;
    }
    Type boolean = Type::boolean();
    if (a.require) check_top(ck, a.require, &boolean, filename);
    for (auto& [var, rhs] : a.updates) check_top(ck, rhs, &sys.vars[var].type, filename);
    ck.pop_scope(a.params.size());
  }

  Type boolean = Type::boolean();
  for (auto& l : sys.lemmas) check_top(ck, l.body, &boolean, filename);
}

}  // namespace gapslice::detail

namespace gapslice {

void TransitionSystem::typecheck(const std::string& filename) {
  detail::typecheck_system_impl(*this, filename);
  enc_order_.resize(vars.size());
  for (uint32_t i = 0; i < vars.size(); ++i) enc_order_[i] = i;
  std::sort(enc_order_.begin(), enc_order_.end(),
            [&](uint32_t a, uint32_t b) { return vars[a].name < vars[b].name; });
}

}  // namespace gapslice
