// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/synthesis.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "gapslice/slicing.hpp"
#include "gapslice/util/hash.hpp"
#include "gapslice/util/parallel.hpp"

namespace gapslice {
namespace {

constexpr uint64_t kSat = std::numeric_limits<uint64_t>::max();

uint64_t mul_sat(uint64_t a, uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSat / b ? kSat : a * b;
}

uint64_t add_sat(uint64_t a, uint64_t b) { return a > kSat - b ? kSat : a + b; }

/// C(n, k), saturating. Exact for the small clause sizes enumerated here.
uint64_t binom(uint64_t n, uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > kSat) return kSat;
  }
  return uint64_t(r);
}

std::vector<Value> binder_domain(const Instance& inst, const Binder& b) {
  if (b.domain_is_const) {
    auto it = inst.consts.find(b.domain);
    if (it == inst.consts.end())
      throw std::runtime_error("constant '" + b.domain + "' has no value in this instance");
    return it->second.items();
  }
  auto si = inst.sort_index(b.domain);
  if (!si) throw std::runtime_error("unknown sort '" + b.domain + "'");
  std::vector<Value> out;
  size_t n = inst.sort(*si).elems.size();
  out.reserve(n);
  for (uint32_t e = 0; e < n; ++e) out.push_back(Value::atom(*si, e));
  return out;
}

bool all_zero(const uint64_t* v, size_t words) {
  for (size_t w = 0; w < words; ++w)
    if (v[w] != 0) return false;
  return true;
}

/// All kept bits set: full words all-ones, final word equal to keep_last.
bool all_ones_kept(const uint64_t* v, size_t words, uint64_t keep_last) {
  for (size_t w = 0; w + 1 < words; ++w)
    if (v[w] != ~uint64_t(0)) return false;
  return (v[words - 1] & keep_last) == keep_last;
}

/// Do the first `n` bits of v all hold?
bool holds_on_prefix(const std::vector<uint64_t>& v, uint64_t n) {
  uint64_t full = n / 64, rem = n % 64;
  for (uint64_t w = 0; w < full; ++w)
    if (v[w] != ~uint64_t(0)) return false;
  if (rem != 0) {
    uint64_t mask = (uint64_t(1) << rem) - 1;
    if ((v[full] & mask) != mask) return false;
  }
  return true;
}

uint64_t popcount_and(const std::vector<uint64_t>& a, const std::vector<uint64_t>& b) {
  uint64_t n = 0;
  for (size_t w = 0; w < a.size(); ++w) n += uint64_t(__builtin_popcountll(a[w] & b[w]));
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// CandidateSpace

CandidateSpace CandidateSpace::build(const Grammar& g, const std::vector<uint32_t>& kept,
                                     uint32_t max_literals) {
  CandidateSpace s;
  s.g_ = &g;
  uint32_t lim = std::min(g.max_literals, max_literals);
  s.max_literals_ = std::max<uint32_t>(lim, 1);
  s.tmpl_preds_.resize(g.templates.size());
  for (uint32_t p : kept)
    for (uint32_t t = 0; t < g.templates.size(); ++t)
      if (g.pred_templates[p] >> t & 1u) s.tmpl_preds_[t].push_back(p);
  s.counts_.resize(g.templates.size());
  s.tmpl_base_.resize(g.templates.size());
  for (uint32_t t = 0; t < g.templates.size(); ++t) {
    s.tmpl_base_[t] = s.total_;
    auto& ks = s.counts_[t];
    ks.assign(s.max_literals_ + 1, 0);
    for (uint32_t k = 1; k <= s.max_literals_; ++k) {
      ks[k] = mul_sat(binom(s.tmpl_preds_[t].size(), k), uint64_t(1) << k);
      s.total_ = add_sat(s.total_, ks[k]);
    }
  }
  return s;
}

Candidate CandidateSpace::unrank(uint64_t index) const {
  if (index >= total_) throw std::out_of_range("candidate index out of range");
  Candidate c;
  c.index = index;
  uint32_t t = 0;
  while (t + 1 < tmpl_base_.size() && tmpl_base_[t + 1] <= index) ++t;
  c.tmpl = t;
  uint64_t local = index - tmpl_base_[t];
  uint32_t k = 1;
  while (local >= counts_[t][k]) {
    local -= counts_[t][k];
    ++k;
  }
  uint64_t comb = local >> k;
  c.neg_mask = uint32_t(local & ((uint64_t(1) << k) - 1));
  const auto& preds = tmpl_preds_[t];
  uint64_t n = preds.size();
  c.lits.reserve(k);
  uint64_t v = 0;
  for (uint32_t i = 0; i < k; ++i) {
    for (;; ++v) {
      uint64_t cnt = binom(n - 1 - v, k - 1 - i);
      if (comb < cnt) break;
      comb -= cnt;
    }
    c.lits.push_back(preds[size_t(v)]);
    ++v;
  }
  return c;
}

Expr CandidateSpace::to_expr(const Candidate& c, const Grammar& g) const {
  std::vector<Expr> lits;
  lits.reserve(c.lits.size());
  for (size_t i = 0; i < c.lits.size(); ++i) {
    Expr lit = g.preds[c.lits[i]];
    if (c.neg_mask >> i & 1u) {
      Expr neg = make_expr(ExprNode::Op::Not, lit->span);
      neg->children.push_back(std::move(lit));
      neg->type = Type::boolean();
      lit = std::move(neg);
    }
    lits.push_back(std::move(lit));
  }
  Expr body;
  if (lits.size() == 1) {
    body = std::move(lits[0]);
  } else {
    body = make_expr(ExprNode::Op::Or, lits[0]->span);
    body->children = std::move(lits);
    body->type = Type::boolean();
  }
  // Wrap the quantifier prefix around the clause, innermost run first;
  // consecutive binders of the same kind share one node.
  const QuantTemplate& qt = g.templates[c.tmpl];
  size_t i = qt.entries.size();
  while (i > 0) {
    size_t j = i;
    bool ex = qt.entries[i - 1].exists;
    while (j > 0 && qt.entries[j - 1].exists == ex) --j;
    Expr q = make_expr(ex ? ExprNode::Op::Exists : ExprNode::Op::Forall, body->span);
    for (size_t b = j; b < i; ++b) q->binders.push_back(qt.entries[b].binder);
    q->children.push_back(std::move(body));
    q->type = Type::boolean();
    body = std::move(q);
    i = j;
  }
  return body;
}

// ---------------------------------------------------------------------------
// CandidateEvaluator

CandidateEvaluator::CandidateEvaluator(const TransitionSystem& sys, const Instance& inst,
                                       const Grammar& g, const CandidateSpace& space,
                                       std::vector<StateView> states, unsigned workers)
    : states_(std::move(states)) {
  words_ = (states_.size() + 63) / 64;
  if (words_ == 0) words_ = 1;
  size_t rem = states_.size() % 64;
  keep_last_ = (rem == 0 && !states_.empty()) ? ~uint64_t(0) : ((uint64_t(1) << rem) - 1);

  tmpls_.resize(g.templates.size());
  for (uint32_t t = 0; t < g.templates.size(); ++t) {
    const auto& preds = space.template_preds(t);
    if (preds.empty()) continue;
    TemplateMatrix& m = tmpls_[t];
    const auto& entries = g.templates[t].entries;
    std::vector<std::vector<Value>> domains;
    domains.reserve(entries.size());
    for (const auto& e : entries) {
      domains.push_back(binder_domain(inst, e.binder));
      m.domain_sizes.push_back(uint32_t(domains.back().size()));
      m.exists.push_back(e.exists);
    }
    uint64_t rows = 1;
    for (uint32_t d : m.domain_sizes) rows = mul_sat(rows, d);
    if (rows == 0 || rows > (uint64_t(1) << 24))
      throw std::runtime_error("quantifier template has too many bindings");
    m.rows = uint32_t(rows);
    m.strides.assign(entries.size(), 1);
    for (size_t b = entries.size(); b-- > 1;)
      m.strides[b - 1] = m.strides[b] * m.domain_sizes[b];
    m.pred_slot.assign(g.preds.size(), uint32_t(-1));
    for (uint32_t s = 0; s < preds.size(); ++s) m.pred_slot[preds[s]] = s;
    m.bits.assign(size_t(preds.size()) * m.rows * words_, 0);

    uint64_t* bits = m.bits.data();
    parallel_chunks(m.rows, workers, [&](unsigned, uint64_t lo, uint64_t hi) {
      Env env(sys, inst);
      env.frame.resize(entries.size());
      for (uint64_t r = lo; r < hi; ++r) {
        uint64_t x = r;
        for (size_t b = entries.size(); b-- > 0;) {
          uint32_t d = m.domain_sizes[b];
          env.frame[entries[b].binder.slot] = domains[b][x % d];
          x /= d;
        }
        for (uint32_t s = 0; s < preds.size(); ++s) {
          const Expr& pe = g.preds[preds[s]];
          uint64_t* out = bits + (size_t(s) * m.rows + r) * words_;
          for (size_t st = 0; st < states_.size(); ++st) {
            env.pre = states_[st];
            if (eval_bool(*pe, env)) out[st >> 6] |= uint64_t(1) << (st & 63);
          }
        }
      }
    });
  }
}

void CandidateEvaluator::fold(const TemplateMatrix& m, const Candidate& c, Workspace& ws,
                              size_t level, uint32_t row_base, uint64_t* out) const {
  size_t depth = m.domain_sizes.size();
  if (level == depth) {
    // The clause at one binding row: OR of the literal bitvectors.
    for (size_t w = 0; w < words_; ++w) out[w] = 0;
    for (size_t i = 0; i < c.lits.size(); ++i) {
      const uint64_t* bits = row_bits(m, m.pred_slot[c.lits[i]], row_base);
      if (c.neg_mask >> i & 1u) {
        for (size_t w = 0; w < words_; ++w) out[w] |= ~bits[w];
      } else {
        for (size_t w = 0; w < words_; ++w) out[w] |= bits[w];
      }
    }
    out[words_ - 1] &= keep_last_;
    return;
  }
  bool ex = m.exists[level];
  // Identity element: all-zero for exists, all kept bits for forall.
  if (ex) {
    for (size_t w = 0; w < words_; ++w) out[w] = 0;
  } else {
    for (size_t w = 0; w < words_; ++w) out[w] = ~uint64_t(0);
    out[words_ - 1] = keep_last_;
  }
  uint64_t* child = ws.levels[level].data();
  for (uint32_t i = 0; i < m.domain_sizes[level]; ++i) {
    fold(m, c, ws, level + 1, row_base + i * m.strides[level], child);
    if (ex) {
      for (size_t w = 0; w < words_; ++w) out[w] |= child[w];
      if (all_ones_kept(out, words_, keep_last_)) break;
    } else {
      for (size_t w = 0; w < words_; ++w) out[w] &= child[w];
      if (all_zero(out, words_)) break;
    }
  }
}

void CandidateEvaluator::eval(const Candidate& c, Workspace& ws,
                              std::vector<uint64_t>& out) const {
  const TemplateMatrix& m = tmpls_[c.tmpl];
  if (m.bits.empty() && !c.lits.empty())
    throw std::logic_error("candidate uses a template with no usable predicates");
  out.resize(words_);
  size_t depth = m.domain_sizes.size();
  if (ws.levels.size() < depth) ws.levels.resize(depth);
  for (size_t l = 0; l < depth; ++l)
    if (ws.levels[l].size() != words_) ws.levels[l].assign(words_, 0);
  fold(m, c, ws, 0, 0, out.data());
  out[words_ - 1] |= ~keep_last_;  // vacuous truth past the states
}

// ---------------------------------------------------------------------------
// Local invariant inference

namespace {

/// One pool candidate: its clause plus its truth fingerprint on the
/// fixed 1024-state sample.
struct PoolEntry {
  Candidate cand;
  std::array<uint64_t, 16> fp;
  bool invariant = false;
};

constexpr size_t kFpStates = 1024;
constexpr size_t kFpWords = kFpStates / 64;
// Random type-correct rows always present in the fingerprint sample: two
// candidates that agree on every reachable state (every invariant does) can
// only be told apart on unreachable states, so the sample must contain some.
constexpr size_t kFpPadMin = 512;

struct PoolStats {
  uint64_t generated = 0;
  uint64_t distinct = 0;
  uint64_t invariants = 0;
};

/// Evaluates the candidates at `indices` (ascending, distinct) against
/// the reachable-state sample, deduplicates semantically (first in
/// canonical order wins) and keeps those holding on every projected
/// reachable state.
std::vector<Candidate> build_pool(const CandidateSpace& space,
                                  const CandidateEvaluator& reach_eval,
                                  uint64_t n_proj_states,
                                  const std::vector<uint32_t>& fp_sample,
                                  const std::vector<uint64_t>& indices, unsigned workers,
                                  PoolStats& stats) {
  std::vector<PoolEntry> entries =
      parallel_collect<PoolEntry>(indices.size(), workers, [&](uint64_t i, std::vector<PoolEntry>& out) {
        thread_local CandidateEvaluator::Workspace ws;
        thread_local std::vector<uint64_t> bits;
        PoolEntry e;
        e.cand = space.unrank(indices[size_t(i)]);
        reach_eval.eval(e.cand, ws, bits);
        e.fp.fill(0);
        for (size_t t = 0; t < fp_sample.size(); ++t) {
          uint32_t s = fp_sample[t];
          if (bits[s / 64] >> (s % 64) & 1) e.fp[t / 64] |= uint64_t(1) << (t % 64);
        }
        e.invariant = holds_on_prefix(bits, n_proj_states);
        out.push_back(std::move(e));
      });

  stats.generated = entries.size();
  // Semantic dedup: identical truth on the sample = identical candidate
  // for every later decision; keep the first in canonical order.
  std::unordered_map<uint64_t, std::vector<uint32_t>> seen;
  std::vector<Candidate> pool;
  uint64_t distinct = 0;
  for (uint32_t ix = 0; ix < entries.size(); ++ix) {
    PoolEntry& e = entries[ix];
    uint64_t h = fnv1a64(e.fp.data(), sizeof(e.fp));
    auto& bucket = seen[h];
    bool dup = false;
    for (uint32_t prev : bucket) {
      if (entries[prev].fp == e.fp) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    bucket.push_back(ix);
    ++distinct;
    if (e.invariant) pool.push_back(std::move(e.cand));
  }
  stats.distinct = distinct;
  stats.invariants = pool.size();
  return pool;
}

/// `count` uniform draws without replacement from [0, total), returned in
/// ascending order. Rejection sampling keeps the draw deterministic in
/// `stream` and independent of the worker count.
std::vector<uint64_t> sample_indices(uint64_t stream, uint64_t count, uint64_t total) {
  if (count > total) count = total;
  std::unordered_set<uint64_t> seen;
  seen.reserve(size_t(count) * 2);
  std::vector<uint64_t> ix;
  ix.reserve(size_t(count));
  Rng rng(stream, 0);
  while (ix.size() < count) {
    uint64_t v = rng.next_below(total);
    if (seen.insert(v).second) ix.push_back(v);
  }
  std::sort(ix.begin(), ix.end());
  return ix;
}

struct Best {
  uint64_t count = 0;
  size_t lits = 0;
  uint64_t index = 0;
  size_t pool_ix = 0;
  bool found = false;

  bool better_than(const Best& o) const {
    if (!o.found) return found;
    if (count != o.count) return count > o.count;
    if (lits != o.lits) return lits < o.lits;
    return index < o.index;
  }
};

}  // namespace

LocalInferenceResult local_inv_inference(
    const TransitionSystem& sys, const Instance& inst, const Grammar& g,
    const std::vector<Expr>& existing_support, const Expr& lemma, uint32_t action_ix,
    ProjectionCache& proj, const InferenceConfig& cfg, uint64_t obligation_seed,
    Deadline deadline) {
  LocalInferenceResult res;
  res.slice = variable_slice(sys, lemma, action_ix);
  std::vector<uint32_t> kept = grammar_slice(g, res.slice);
  res.sliced_preds = uint32_t(kept.size());

  auto past_deadline = [&] { return std::chrono::steady_clock::now() >= deadline; };
  auto fail_timeout = [&]() -> LocalInferenceResult& {
    res.timed_out = true;
    res.failure = "timed out";
    return res;
  };

  // Remembers how many counterexamples are still standing and keeps a few
  // pretty-printed pre-states so failure reports can show them. `act` masks
  // the survivors; null means all of `cs` survive.
  auto record_survivors = [&](const std::vector<Cti>& cs, const std::vector<uint64_t>* act,
                              uint64_t left) {
    res.ctis_remaining = left;
    auto resolver = [&](uint32_t s, uint32_t e) { return inst.atom_name(s, e); };
    for (size_t i = 0; i < cs.size() && res.sample_ctis.size() < 5; ++i) {
      if (act && !((*act)[i / 64] >> (i % 64) & 1)) continue;
      std::string line;
      for (size_t vi = 0; vi < sys.vars.size(); ++vi) {
        if (vi) line += ", ";
        line += sys.vars[vi].name + "=" + cs[i].pre.v[vi].to_string(resolver);
      }
      res.sample_ctis.push_back(std::move(line));
    }
  };

  CtiOptions copt;
  copt.n_ctis = cfg.n_ctis;
  copt.attempts = cfg.cti_attempts_factor * cfg.n_ctis;
  copt.exhaustive_threshold = cfg.exhaustive_threshold;
  copt.workers = cfg.workers;

  // Counterexamples under the present support.
  copt.seed = derive_stream(obligation_seed, 3);
  CtiResult ctis = generate_ctis(sys, inst, existing_support, lemma, action_ix, copt, deadline);
  res.exhaustive_cti = ctis.exhaustive;
  res.ctis_initial = ctis.ctis.size();
  if (ctis.ctis.empty()) {
    if (!ctis.complete) return fail_timeout();
    res.success = true;  // already inductive relative to the present support
    return res;
  }

  // Projected reachable states in canonical order, followed by seeded
  // type-correct random rows. The random block always exists so the dedup
  // fingerprint can separate candidates that agree on every reachable state.
  const StateSet& pr = proj.project(res.slice);
  res.proj_states = pr.size();
  std::vector<uint32_t> order = pr.canonical_order();
  std::vector<StateView> views;
  size_t n_pad = pr.size() < kFpStates - kFpPadMin ? kFpStates - pr.size() : kFpPadMin;
  views.reserve(pr.size() + n_pad);
  for (uint32_t id : order) views.push_back(StateView{pr.row(id), pr.col_map().data()});
  std::vector<Value> pad;
  size_t width = pr.width();
  {
    StateSampler sampler(sys, inst);
    Rng rng(derive_stream(obligation_seed, 1), 0);
    pad.resize(n_pad * width);
    for (size_t i = 0; i < n_pad; ++i)
      for (size_t c = 0; c < width; ++c)
        pad[i * width + c] = sampler.sample_var(pr.schema()[c], rng);
    for (size_t i = 0; i < n_pad; ++i)
      views.push_back(StateView{pad.data() + i * width, pr.col_map().data()});
  }

  // Fingerprint sample: the reachable half strides across the whole
  // projection, the rest is the random block.
  std::vector<uint32_t> fp_sample(kFpStates);
  size_t n_reach_fp = std::min<size_t>(pr.size(), kFpStates - n_pad);
  for (size_t t = 0; t < n_reach_fp; ++t)
    fp_sample[t] = uint32_t(uint64_t(t) * pr.size() / n_reach_fp);
  for (size_t u = 0; u + n_reach_fp < kFpStates; ++u)
    fp_sample[n_reach_fp + u] = uint32_t(pr.size() + u);

  CandidateSpace space = CandidateSpace::build(g, kept, cfg.max_literals);
  if (space.total() == 0) {
    record_survivors(ctis.ctis, nullptr, ctis.ctis.size());
    res.failure = "the sliced grammar yields no candidates";
    return res;
  }
  res.exhaustive_pool = space.total() <= cfg.n_invs;
  CandidateEvaluator reach_eval(sys, inst, g, space, std::move(views), cfg.workers);

  // Candidate pool for the current round.
  std::vector<Candidate> pool;
  auto next_pool = [&]() {
    std::vector<uint64_t> indices;
    if (res.exhaustive_pool) {
      indices.resize(space.total());
      for (uint64_t i = 0; i < space.total(); ++i) indices[i] = i;
    } else {
      indices = sample_indices(derive_stream(obligation_seed, 2 + 2 * uint64_t(res.rounds)),
                               cfg.n_invs, space.total());
    }
    PoolStats stats;
    pool = build_pool(space, reach_eval, pr.size(), fp_sample, indices, cfg.workers, stats);
    res.pool_generated = stats.generated;
    res.pool_distinct = stats.distinct;
    res.pool_invariants = stats.invariants;
    ++res.rounds;
  };
  next_pool();

  // Greedy elimination loop.
  auto cti_views = [&](const std::vector<Cti>& cs) {
    std::vector<StateView> v;
    v.reserve(cs.size());
    for (const Cti& c : cs) v.push_back(StateView::of(c.pre));
    return v;
  };
  auto active_mask = [&](size_t n) {
    std::vector<uint64_t> m((n + 63) / 64, ~uint64_t(0));
    if (n % 64) m.back() = (uint64_t(1) << (n % 64)) - 1;
    return m;
  };

  auto cti_eval = std::make_unique<CandidateEvaluator>(sys, inst, g, space,
                                                       cti_views(ctis.ctis), cfg.workers);
  std::vector<uint64_t> active = active_mask(ctis.ctis.size());
  uint64_t remaining = ctis.ctis.size();
  uint32_t regens = 0;

  while (true) {
    if (past_deadline()) {
      record_survivors(ctis.ctis, &active, remaining);
      return fail_timeout();
    }

    // Pick the candidate eliminating the most remaining counterexamples
    // (ties: fewest literals, then lowest canonical index). The per-chunk
    // bests merge in chunk order, so the choice is worker-independent.
    unsigned workers = resolve_workers(cfg.workers);
    unsigned chunks = workers;
    if (uint64_t(chunks) > pool.size() && !pool.empty()) chunks = unsigned(pool.size());
    if (chunks == 0) chunks = 1;
    std::vector<Best> bests(chunks);
    parallel_chunks(pool.size(), workers, [&](unsigned c, uint64_t lo, uint64_t hi) {
      thread_local CandidateEvaluator::Workspace ws;
      thread_local std::vector<uint64_t> bits;
      Best best;
      for (uint64_t i = lo; i < hi; ++i) {
        cti_eval->eval(pool[size_t(i)], ws, bits);
        // A counterexample is eliminated where the candidate is false.
        uint64_t count = 0;
        for (size_t w = 0; w < bits.size() && w < active.size(); ++w)
          count += uint64_t(__builtin_popcountll(~bits[w] & active[w]));
        Best cur{count, pool[size_t(i)].lits.size(), pool[size_t(i)].index, size_t(i), true};
        if (count > 0 && cur.better_than(best)) best = cur;
      }
      bests[c] = best;
    });
    Best best;
    for (const Best& b : bests)
      if (b.better_than(best)) best = b;

    if (!best.found) {
      // Nothing in the pool eliminates a remaining counterexample.
      if (res.exhaustive_pool) {
        record_survivors(ctis.ctis, &active, remaining);
        res.failure = "no candidate invariant eliminates the remaining counterexamples";
        return res;
      }
      if (res.rounds >= cfg.max_rounds) {
        record_survivors(ctis.ctis, &active, remaining);
        res.failure = "candidate pool exhausted after " + std::to_string(res.rounds) +
                      " sampling rounds";
        return res;
      }
      next_pool();
      continue;
    }

    const Candidate& picked = pool[best.pool_ix];
    res.new_support.push_back(space.to_expr(picked, g));
    res.ctis_eliminated += best.count;
    {
      CandidateEvaluator::Workspace ws;
      std::vector<uint64_t> bits;
      cti_eval->eval(picked, ws, bits);
      for (size_t w = 0; w < active.size(); ++w) active[w] &= bits[w];
    }
    remaining -= best.count;

    if (remaining == 0) {
      // All known counterexamples handled: look for fresh ones under the
      // grown support.
      if (past_deadline()) return fail_timeout();
      std::vector<Expr> support = existing_support;
      support.insert(support.end(), res.new_support.begin(), res.new_support.end());
      ++regens;
      copt.seed = derive_stream(obligation_seed, 3 + 2 * uint64_t(regens));
      ctis = generate_ctis(sys, inst, support, lemma, action_ix, copt, deadline);
      if (ctis.ctis.empty()) {
        if (!ctis.complete) return fail_timeout();
        res.success = true;
        return res;
      }
      cti_eval = std::make_unique<CandidateEvaluator>(sys, inst, g, space,
                                                      cti_views(ctis.ctis), cfg.workers);
      active = active_mask(ctis.ctis.size());
      remaining = ctis.ctis.size();
    }
  }
}

}  // namespace gapslice
