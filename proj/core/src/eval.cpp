// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/eval.hpp"

#include <algorithm>

namespace gapslice {

namespace {

using Op = ExprNode::Op;

/// Values a binder or parameter ranges over: a sort's atoms, or the members
/// of a set-valued constant.
std::vector<Value> domain_values(const Env& env, const std::string& domain,
                                 bool domain_is_const, SourceSpan span) {
  if (domain_is_const) {
    auto it = env.inst->consts.find(domain);
    if (it == env.inst->consts.end())
      throw EvalError(span, "constant '" + domain + "' has no value in this instance");
    return it->second.items();
  }
  auto si = env.inst->sort_index(domain);
  if (!si) throw EvalError(span, "unknown sort '" + domain + "'");
  std::vector<Value> out;
  out.reserve(env.inst->sort(*si).elems.size());
  for (uint32_t e = 0; e < env.inst->sort(*si).elems.size(); ++e)
    out.push_back(Value::atom(*si, e));
  return out;
}

const Value& state_var(const StateView& view, uint32_t ix, SourceSpan span,
                       const char* which) {
  if (!view.row)
    throw EvalError(span, std::string("no ") + which + " state in this context");
  if (view.cols && view.cols[ix] < 0)
    throw EvalError(span, "variable is outside this state's schema");
  return view.var(ix);
}

bool eval_quant(const ExprNode& e, Env& env, size_t level);

Value eval_node(const ExprNode& e, Env& env) {
  switch (e.op) {
    case Op::BoolLit:
      return Value::boolean(e.bval);
    case Op::IntLit:
      return Value::integer(e.ival);
    case Op::AtomLit: {
      auto a = env.inst->atom(e.name);
      if (!a)
        throw EvalError(e.span, "'" + e.name + "' is not an element of any sort");
      return Value::atom(a->first, a->second);
    }
    case Op::VarRef:
      return state_var(e.primed ? env.post : env.pre, e.var, e.span,
                       e.primed ? "post" : "pre");
    case Op::ParamRef:
      if (e.slot >= env.frame.size())
        throw EvalError(e.span, "internal: unbound parameter '" + e.name + "'");
      return env.frame[e.slot];
    case Op::ConstRef: {
      auto it = env.inst->consts.find(e.name);
      if (it == env.inst->consts.end())
        throw EvalError(e.span, "constant '" + e.name + "' has no value");
      return it->second;
    }
    case Op::SortSetRef: {
      auto si = env.inst->sort_index(e.name);
      if (!si) throw EvalError(e.span, "unknown sort '" + e.name + "'");
      std::vector<Value> atoms;
      for (uint32_t i = 0; i < env.inst->sort(*si).elems.size(); ++i)
        atoms.push_back(Value::atom(*si, i));
      return Value::set(std::move(atoms));
    }

    case Op::Not:
      return Value::boolean(!eval_bool(*e.children[0], env));
    case Op::And: {
      for (const auto& c : e.children)
        if (!eval_bool(*c, env)) return Value::boolean(false);
      return Value::boolean(true);
    }
    case Op::Or: {
      for (const auto& c : e.children)
        if (eval_bool(*c, env)) return Value::boolean(true);
      return Value::boolean(false);
    }
    case Op::Implies:
      return Value::boolean(!eval_bool(*e.children[0], env) ||
                            eval_bool(*e.children[1], env));

    case Op::Eq:
      return Value::boolean(eval_node(*e.children[0], env) ==
                            eval_node(*e.children[1], env));
    case Op::Ne:
      return Value::boolean(eval_node(*e.children[0], env) !=
                            eval_node(*e.children[1], env));

    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: {
      int64_t a = eval_node(*e.children[0], env).as_int();
      int64_t b = eval_node(*e.children[1], env).as_int();
      switch (e.op) {
        case Op::Lt: return Value::boolean(a < b);
        case Op::Le: return Value::boolean(a <= b);
        case Op::Gt: return Value::boolean(a > b);
        default:     return Value::boolean(a >= b);
      }
    }

    case Op::In:
    case Op::NotIn: {
      Value el = eval_node(*e.children[0], env);
      Value set = eval_node(*e.children[1], env);
      bool in = set.set_contains(el);
      return Value::boolean(e.op == Op::In ? in : !in);
    }
    case Op::Subseteq: {
      Value a = eval_node(*e.children[0], env);
      Value b = eval_node(*e.children[1], env);
      for (const auto& m : a.items())
        if (!b.set_contains(m)) return Value::boolean(false);
      return Value::boolean(true);
    }

    case Op::Union:
    case Op::Intersect:
    case Op::Setminus: {
      Value a = eval_node(*e.children[0], env);
      Value b = eval_node(*e.children[1], env);
      std::vector<Value> out;
      if (e.op == Op::Union) {
        out = a.items();
        for (const auto& m : b.items()) out.push_back(m);
      } else if (e.op == Op::Intersect) {
        for (const auto& m : a.items())
          if (b.set_contains(m)) out.push_back(m);
      } else {
        for (const auto& m : a.items())
          if (!b.set_contains(m)) out.push_back(m);
      }
      return Value::set(std::move(out));
    }

    case Op::Add:
    case Op::Sub: {
      int64_t a = eval_node(*e.children[0], env).as_int();
      int64_t b = eval_node(*e.children[1], env).as_int();
      return Value::integer(e.op == Op::Add ? a + b : a - b);
    }

    case Op::SetEnum: {
      std::vector<Value> items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval_node(*c, env));
      return Value::set(std::move(items));
    }

    case Op::SetComp: {
      const Binder& b = e.binders[0];
      std::vector<Value> domain = domain_values(env, b.domain, b.domain_is_const, e.span);
      if (env.frame.size() <= b.slot) env.frame.resize(b.slot + 1);
      std::vector<Value> members;
      for (const auto& v : domain) {
        env.frame[b.slot] = v;
        if (eval_bool(*e.children[0], env)) members.push_back(v);
      }
      return Value::set(std::move(members));
    }

    case Op::TupleExpr: {
      std::vector<Value> items;
      items.reserve(e.children.size());
      for (const auto& c : e.children) items.push_back(eval_node(*c, env));
      return Value::tuple(std::move(items));
    }

    case Op::FnApp: {
      Value f = eval_node(*e.children[0], env);
      Value k = eval_node(*e.children[1], env);
      try {
        return f.fn_apply(k);
      } catch (const std::runtime_error& ex) {
        throw EvalError(e.span, ex.what());
      }
    }

    case Op::FnLit: {
      const Binder& b = e.binders[0];
      std::vector<Value> keys = domain_values(env, b.domain, b.domain_is_const, e.span);
      if (env.frame.size() <= b.slot) env.frame.resize(b.slot + 1);
      std::vector<Value> vals;
      vals.reserve(keys.size());
      for (const auto& k : keys) {
        env.frame[b.slot] = k;
        vals.push_back(eval_node(*e.children[0], env));
      }
      return Value::fn(std::move(keys), std::move(vals));
    }

    case Op::FnUpdate: {
      Value f = eval_node(*e.children[0], env);
      Value k = eval_node(*e.children[1], env);
      Value v = eval_node(*e.children[2], env);
      try {
        return f.fn_update(k, std::move(v));
      } catch (const std::runtime_error& ex) {
        throw EvalError(e.span, ex.what());
      }
    }

    case Op::Forall:
    case Op::Exists:
      return Value::boolean(eval_quant(e, env, 0));
  }
  throw EvalError(e.span, "internal: unhandled expression kind");
}

bool eval_quant(const ExprNode& e, Env& env, size_t level) {
  if (level == e.binders.size()) return eval_bool(*e.children[0], env);
  const Binder& b = e.binders[level];
  std::vector<Value> domain = domain_values(env, b.domain, b.domain_is_const, e.span);
  if (env.frame.size() <= b.slot) env.frame.resize(b.slot + 1);
  bool forall = e.op == Op::Forall;
  for (const auto& v : domain) {
    env.frame[b.slot] = v;
    bool r = eval_quant(e, env, level + 1);
    if (forall && !r) return false;
    if (!forall && r) return true;
  }
  return forall;
}

/// Recursively checks that a value about to be stored in a variable of type
/// `t` keeps every ranged integer inside its bounds.
void check_in_range(const Value& v, const Type& t, const Instance& inst,
                    SourceSpan span, const std::string& var_name) {
  switch (t.k) {
    case Type::K::IntRange: {
      auto it = inst.ranges.find(t.name);
      if (it == inst.ranges.end())
        throw EvalError(span, "undefined integer range '" + t.name + "'");
      if (v.as_int() < it->second.first || v.as_int() > it->second.second)
        throw EvalError(span, "value " + std::to_string(v.as_int()) +
                                  " assigned to '" + var_name + "' is outside range " +
                                  t.name + " [" + std::to_string(it->second.first) + ", " +
                                  std::to_string(it->second.second) + "]");
      return;
    }
    case Type::K::Set:
      for (const auto& m : v.items()) check_in_range(m, t.elem(), inst, span, var_name);
      return;
    case Type::K::Tuple:
      for (size_t i = 0; i < t.args.size(); ++i)
        check_in_range(v.items()[i], t.args[i], inst, span, var_name);
      return;
    case Type::K::Fn:
      for (size_t i = 0; i < v.fn_size(); ++i)
        check_in_range(v.fn_val(i), t.elem(), inst, span, var_name);
      return;
    default:
      return;
  }
}

}  // namespace

Value eval(const ExprNode& e, Env& env) { return eval_node(e, env); }

bool eval_bool(const ExprNode& e, Env& env) { return eval_node(e, env).as_bool(); }

std::vector<State> init_states(const TransitionSystem& sys, const Instance& inst) {
  Env env(sys, inst);
  // One value list per variable, in variable order.
  std::vector<std::vector<Value>> choices(sys.vars.size());
  for (const auto& cl : sys.inits) {
    Value v = eval(*cl.expr, env);
    if (cl.choice) {
      choices[cl.var] = v.items();
      if (choices[cl.var].empty())
        throw EvalError(cl.expr->span, "init choice for '" + sys.vars[cl.var].name +
                                           "' is the empty set");
    } else {
      choices[cl.var] = {std::move(v)};
    }
  }
  for (uint32_t i = 0; i < sys.vars.size(); ++i)
    for (const auto& v : choices[i])
      check_in_range(v, sys.vars[i].type, inst, {1, 1}, sys.vars[i].name);

  std::vector<State> out;
  std::vector<size_t> ix(sys.vars.size(), 0);
  while (true) {
    State s;
    s.v.reserve(sys.vars.size());
    for (uint32_t i = 0; i < sys.vars.size(); ++i) s.v.push_back(choices[i][ix[i]]);
    out.push_back(std::move(s));
    size_t i = sys.vars.size();
    while (i-- > 0) {  // last variable fastest
      if (++ix[i] < choices[i].size()) break;
      ix[i] = 0;
      if (i == 0) return out;
    }
    if (sys.vars.empty()) return out;
  }
}

std::vector<std::vector<Value>> action_bindings(const TransitionSystem& sys,
                                                const Instance& inst,
                                                const ActionDecl& action) {
  Env env(sys, inst);
  std::vector<std::vector<Value>> domains;
  size_t total = 1;
  for (const auto& p : action.params) {
    domains.push_back(domain_values(env, p.domain, p.domain_is_const, {1, 1}));
    total *= domains.back().size();
  }
  std::vector<std::vector<Value>> out;
  out.reserve(total);
  std::vector<size_t> ix(action.params.size(), 0);
  for (size_t n = 0; n < total; ++n) {
    std::vector<Value> binding;
    binding.reserve(action.params.size());
    for (size_t i = 0; i < action.params.size(); ++i) binding.push_back(domains[i][ix[i]]);
    out.push_back(std::move(binding));
    for (size_t i = action.params.size(); i-- > 0;) {  // last parameter fastest
      if (++ix[i] < domains[i].size()) break;
      ix[i] = 0;
    }
  }
  return out;
}

bool action_enabled(const TransitionSystem& sys, const Instance& inst,
                    const State& pre, uint32_t action_ix,
                    const std::vector<Value>& binding) {
  const ActionDecl& a = sys.actions[action_ix];
  if (!a.require) return true;
  Env env(sys, inst);
  env.pre = StateView::of(pre);
  env.frame = binding;
  return eval_bool(*a.require, env);
}

State apply_action(const TransitionSystem& sys, const Instance& inst,
                   const State& pre, uint32_t action_ix,
                   const std::vector<Value>& binding) {
  const ActionDecl& a = sys.actions[action_ix];
  Env env(sys, inst);
  env.pre = StateView::of(pre);
  env.frame = binding;
  State post = pre;  // unlisted variables carry over
  for (const auto& [var, rhs] : a.updates) {
    Value v = eval(*rhs, env);  // all updates read the pre-state
    check_in_range(v, sys.vars[var].type, inst, rhs->span, sys.vars[var].name);
    post.v[var] = std::move(v);
  }
  return post;
}

void for_each_transition(
    const TransitionSystem& sys, const Instance& inst, const State& pre,
    const std::function<bool(uint32_t, const std::vector<Value>&, const State&)>& fn) {
  for (uint32_t ai = 0; ai < sys.actions.size(); ++ai) {
    for (const auto& binding : action_bindings(sys, inst, sys.actions[ai])) {
      if (!action_enabled(sys, inst, pre, ai, binding)) continue;
      State post = apply_action(sys, inst, pre, ai, binding);
      if (!fn(ai, binding, post)) return;
    }
  }
}

std::vector<State> successors(const TransitionSystem& sys, const Instance& inst,
                              const State& pre) {
  std::vector<State> out;
  for_each_transition(sys, inst, pre,
                      [&](uint32_t, const std::vector<Value>&, const State& s) {
                        out.push_back(s);
                        return true;
                      });
  return out;
}

}  // namespace gapslice
