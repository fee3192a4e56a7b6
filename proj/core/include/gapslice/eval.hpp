// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_EVAL_HPP
#define GAPSLICE_EVAL_HPP

#include <functional>
#include <stdexcept>
#include <vector>

#include "gapslice/expr.hpp"
#include "gapslice/instance.hpp"
#include "gapslice/state.hpp"
#include "gapslice/system.hpp"

namespace gapslice {

/// Raised when evaluation itself is ill-defined (function applied outside
/// its domain, out-of-range integer assigned to a ranged variable, primed
/// variable without a post-state). These indicate a bug in the protocol
/// definition and abort the enclosing command with a diagnostic.
class EvalError : public std::runtime_error {
 public:
  EvalError(SourceSpan span, const std::string& msg)
      : std::runtime_error(msg), span_(span) {}
  const SourceSpan& span() const { return span_; }

 private:
  SourceSpan span_;
};

/// A read-only view of a state: a row of values plus the map from system
/// variable index to row column (null = identity, for full State storage).
struct StateView {
  const Value* row = nullptr;
  const int32_t* cols = nullptr;

  static StateView of(const State& s) { return {s.v.data(), nullptr}; }
  const Value& var(uint32_t ix) const {
    return cols ? row[cols[ix]] : row[ix];
  }
};

/// Evaluation context. `frame` holds action parameters and quantifier
/// bindings by slot; pre/post are the states read by unprimed/primed
/// variable references.
struct Env {
  const TransitionSystem* sys = nullptr;
  const Instance* inst = nullptr;
  StateView pre;
  StateView post;   // row == nullptr when no transition context
  std::vector<Value> frame;

  Env(const TransitionSystem& s, const Instance& i) : sys(&s), inst(&i) {}
};

Value eval(const ExprNode& e, Env& env);
bool eval_bool(const ExprNode& e, Env& env);
inline bool eval_bool(const Expr& e, Env& env) { return eval_bool(*e, env); }

/// All initial states, in canonical order (cross product of `in` choices).
std::vector<State> init_states(const TransitionSystem& sys, const Instance& inst);

/// Enumerates parameter bindings of an action in canonical order (nested
/// loops over each parameter's domain, last parameter fastest).
std::vector<std::vector<Value>> action_bindings(const TransitionSystem& sys,
                                                const Instance& inst,
                                                const ActionDecl& action);

/// Evaluates the guard of `action` under `binding` in `pre`.
bool action_enabled(const TransitionSystem& sys, const Instance& inst,
                    const State& pre, uint32_t action_ix,
                    const std::vector<Value>& binding);

/// Applies `action` under `binding` to `pre`. The guard is not re-checked.
/// Updates are all evaluated against the pre-state; unlisted variables are
/// carried over. Range-checked writes to ranged variables.
State apply_action(const TransitionSystem& sys, const Instance& inst,
                   const State& pre, uint32_t action_ix,
                   const std::vector<Value>& binding);

/// Calls fn(action index, binding, successor) for every enabled transition
/// of `pre`, in canonical order (actions in declaration order, bindings in
/// canonical order). Return false from fn to stop early.
void for_each_transition(
    const TransitionSystem& sys, const Instance& inst, const State& pre,
    const std::function<bool(uint32_t, const std::vector<Value>&, const State&)>& fn);

/// All successor states of `pre` (not deduplicated).
std::vector<State> successors(const TransitionSystem& sys, const Instance& inst,
                              const State& pre);

}  // namespace gapslice

#endif  // GAPSLICE_EVAL_HPP
