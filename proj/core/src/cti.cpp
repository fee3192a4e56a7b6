// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/cti.hpp"

#include <atomic>
#include <limits>
#include <unordered_set>

#include "gapslice/util/parallel.hpp"

namespace gapslice {

uint64_t type_state_space_size(const TransitionSystem& sys, const Instance& inst) {
  constexpr uint64_t kMax = uint64_t(1) << 62;
  uint64_t total = 1;
  for (const auto& v : sys.vars) {
    uint64_t n = inst.type_size(v.type);
    if (n != 0 && total > kMax / n) return std::numeric_limits<int64_t>::max();
    total *= n;
  }
  return total;
}

void for_each_type_state(const TransitionSystem& sys, const Instance& inst,
                         const std::function<bool(const State&)>& fn) {
  std::vector<std::vector<Value>> domains;
  domains.reserve(sys.vars.size());
  for (const auto& v : sys.vars) domains.push_back(inst.enumerate(v.type));

  State s;
  s.v.reserve(sys.vars.size());
  for (const auto& d : domains) s.v.push_back(d.front());
  std::vector<size_t> ix(sys.vars.size(), 0);

  while (true) {
    if (!fn(s)) return;
    size_t i = sys.vars.size();
    bool wrapped = true;
    while (i-- > 0) {
      if (++ix[i] < domains[i].size()) {
        s.v[i] = domains[i][ix[i]];
        wrapped = false;
        break;
      }
      ix[i] = 0;
      s.v[i] = domains[i][0];
    }
    if (wrapped) return;
  }
}

// --- type-correct sampling --------------------------------------------------

struct StateSampler::Plan {
  Type::K kind;
  int64_t lo = 0, hi = 0;                       // IntRange
  std::vector<Value> elems;                     // Sort atoms / Set element pool / Fn keys
  std::vector<std::shared_ptr<const Plan>> children;  // Tuple parts / Set & Fn element plan
};

namespace {

std::shared_ptr<const StateSampler::Plan> build_plan(const Type& t, const Instance& inst);

Value sample_plan(const StateSampler::Plan& p, Rng& rng) {
  switch (p.kind) {
    case Type::K::Bool:
      return Value::boolean(rng.next_bool());
    case Type::K::Sort:
      return p.elems[rng.next_below(p.elems.size())];
    case Type::K::IntRange:
      return Value::integer(p.lo + int64_t(rng.next_below(uint64_t(p.hi - p.lo + 1))));
    case Type::K::Set: {
      std::vector<Value> members;
      for (const auto& e : p.elems)
        if (rng.next_bool()) members.push_back(e);
      return Value::set(std::move(members));
    }
    case Type::K::Tuple: {
      std::vector<Value> items;
      items.reserve(p.children.size());
      for (const auto& c : p.children) items.push_back(sample_plan(*c, rng));
      return Value::tuple(std::move(items));
    }
    case Type::K::Fn: {
      std::vector<Value> vals;
      vals.reserve(p.elems.size());
      for (size_t i = 0; i < p.elems.size(); ++i)
        vals.push_back(sample_plan(*p.children[0], rng));
      return Value::fn(p.elems, std::move(vals));
    }
    default:
      throw std::invalid_argument("cannot sample unbounded integers");
  }
}

std::shared_ptr<const StateSampler::Plan> build_plan(const Type& t, const Instance& inst) {
  auto p = std::make_shared<StateSampler::Plan>();
  p->kind = t.k;
  switch (t.k) {
    case Type::K::Bool:
      break;
    case Type::K::Sort:
    case Type::K::Set:
      p->elems = inst.enumerate(t.k == Type::K::Sort ? t : t.elem());
      break;
    case Type::K::IntRange: {
      auto it = inst.ranges.find(t.name);
      if (it == inst.ranges.end())
        throw std::invalid_argument("undefined integer range '" + t.name + "'");
      p->lo = it->second.first;
      p->hi = it->second.second;
      break;
    }
    case Type::K::Tuple:
      for (const auto& a : t.args) p->children.push_back(build_plan(a, inst));
      break;
    case Type::K::Fn:
      p->elems = inst.enumerate(Type::sort(t.name));
      p->children.push_back(build_plan(t.elem(), inst));
      break;
    case Type::K::Int:
      throw std::invalid_argument("cannot sample unbounded integers");
  }
  return p;
}

}  // namespace

StateSampler::StateSampler(const TransitionSystem& sys, const Instance& inst) {
  for (const auto& v : sys.vars) plans_.push_back(build_plan(v.type, inst));
}

State StateSampler::sample(Rng& rng) const {
  State s;
  s.v.reserve(plans_.size());
  for (const auto& p : plans_) s.v.push_back(sample_plan(*p, rng));
  return s;
}

Value StateSampler::sample_var(uint32_t var, Rng& rng) const {
  return sample_plan(*plans_[var], rng);
}

// --- counterexample search ---------------------------------------------------

namespace {

/// Shared per-query context: bindings, reusable Env, dedup.
struct Query {
  const TransitionSystem& sys;
  const Instance& inst;
  const std::vector<Expr>& support;
  const Expr& lemma;
  uint32_t action_ix;
  std::vector<std::vector<Value>> bindings;

  Query(const TransitionSystem& s, const Instance& i, const std::vector<Expr>& sup,
        const Expr& l, uint32_t a)
      : sys(s), inst(i), support(sup), lemma(l), action_ix(a),
        bindings(action_bindings(s, i, s.actions[a])) {}

  /// Appends every counterexample rooted at `pre` to `out`. `env` and
  /// `penv` are caller-owned scratch contexts (reused across pre-states).
  void check_pre(const State& pre, std::vector<Cti>& out, Env& env, Env& penv) const {
    env.pre = StateView::of(pre);
    env.frame.clear();
    for (const auto& sup : support)
      if (!eval_bool(*sup, env)) return;
    if (!eval_bool(*lemma, env)) return;

    const ActionDecl& act = sys.actions[action_ix];
    for (const auto& b : bindings) {
      env.frame = b;
      if (act.require && !eval_bool(*act.require, env)) continue;
      State post = apply_action(sys, inst, pre, action_ix, b);
      // The lemma is closed over state; evaluate its post-state copy by
      // pointing a fresh pre view at the successor.
      penv.pre = StateView::of(post);
      if (!eval_bool(*lemma, penv)) out.push_back(Cti{pre, b, std::move(post)});
    }
  }
};

std::string cti_key(const Cti& c) {
  Bytes enc;
  for (const auto& v : c.pre.v) v.encode(enc);
  enc.push_back(0xff);
  for (const auto& v : c.binding) v.encode(enc);
  return std::string(enc.begin(), enc.end());
}

}  // namespace

CtiResult generate_ctis(const TransitionSystem& sys, const Instance& inst,
                        const std::vector<Expr>& support, const Expr& lemma,
                        uint32_t action_ix, const CtiOptions& opts,
                        Deadline deadline) {
  CtiResult res;
  Query q(sys, inst, support, lemma, action_ix);
  uint64_t space = type_state_space_size(sys, inst);
  std::unordered_set<std::string> seen;

  if (space <= opts.exhaustive_threshold) {
    res.exhaustive = true;
    Env env(sys, inst);
    Env penv(sys, inst);
    uint64_t since_deadline_check = 0;
    for_each_type_state(sys, inst, [&](const State& pre) {
      ++res.checked;
      if (++since_deadline_check >= 4096) {
        since_deadline_check = 0;
        if (std::chrono::steady_clock::now() > deadline) {
          res.complete = false;
          return false;
        }
      }
      std::vector<Cti> found;
      q.check_pre(pre, found, env, penv);
      for (auto& c : found) {
        if (!seen.insert(cti_key(c)).second) continue;
        res.ctis.push_back(std::move(c));
        if (res.ctis.size() >= opts.n_ctis) {
          res.complete = false;
          return false;
        }
      }
      return true;
    });
    return res;
  }

  // Sampled mode: attempt i samples a state from stream (seed, i), so the
  // result is a pure function of the attempt range and merges identically
  // for any worker split.
  StateSampler sampler(sys, inst);
  struct Hit {
    uint64_t attempt;
    Cti cti;
  };
  std::atomic<bool> stop{false};
  std::atomic<uint64_t> checked{0};
  auto hits = parallel_collect<Hit>(
      opts.attempts, opts.workers, [&](uint64_t i, std::vector<Hit>& out) {
        if (stop.load(std::memory_order_relaxed)) return;
        if ((i & 1023) == 0 && std::chrono::steady_clock::now() > deadline) {
          stop.store(true, std::memory_order_relaxed);
          return;
        }
        checked.fetch_add(1, std::memory_order_relaxed);
        Rng rng(opts.seed, i);
        State pre = sampler.sample(rng);
        Env env(sys, inst);
        Env penv(sys, inst);
        std::vector<Cti> found;
        q.check_pre(pre, found, env, penv);
        for (auto& c : found) out.push_back(Hit{i, std::move(c)});
      });

  res.checked = checked.load();
  if (stop.load()) res.complete = false;
  for (auto& h : hits) {
    if (!seen.insert(cti_key(h.cti)).second) continue;
    res.ctis.push_back(std::move(h.cti));
    if (res.ctis.size() >= opts.n_ctis) {
      res.complete = false;
      break;
    }
  }
  return res;
}

std::optional<Cti> find_cti(const TransitionSystem& sys, const Instance& inst,
                            const std::vector<Expr>& support, const Expr& lemma,
                            uint32_t action_ix, const CtiOptions& opts,
                            Deadline deadline) {
  CtiOptions one = opts;
  one.n_ctis = 1;
  CtiResult r = generate_ctis(sys, inst, support, lemma, action_ix, one, deadline);
  if (r.ctis.empty()) return std::nullopt;
  return std::move(r.ctis.front());
}

bool holds_on_init(const TransitionSystem& sys, const Instance& inst, const Expr& lemma) {
  Env env(sys, inst);
  for (const State& s : init_states(sys, inst)) {
    env.pre = StateView::of(s);
    if (!eval_bool(*lemma, env)) return false;
  }
  return true;
}

}  // namespace gapslice
