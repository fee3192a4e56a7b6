// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/reach.hpp"

#include <chrono>
#include <filesystem>

#include "gapslice/util/hash.hpp"

namespace gapslice {

ReachResult reachable_states(const TransitionSystem& sys, const Instance& inst,
                             const ReachOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto deadline =
      opts.timeout_s > 0
          ? clock::now() + std::chrono::duration_cast<clock::duration>(
                               std::chrono::duration<double>(opts.timeout_s))
          : clock::time_point::max();

  ReachResult res{StateSet::full(sys)};

  // Bindings per action are state-independent; compute them once.
  std::vector<std::vector<std::vector<Value>>> bindings(sys.actions.size());
  for (uint32_t ai = 0; ai < sys.actions.size(); ++ai)
    bindings[ai] = action_bindings(sys, inst, sys.actions[ai]);

  std::vector<uint32_t> frontier;
  for (const State& s : init_states(sys, inst)) {
    auto [id, fresh] = res.states.insert(s);
    if (fresh) frontier.push_back(id);
  }

  // Reconstructs a State (declaration-order values) from a stored row.
  const auto& schema = res.states.schema();
  auto materialize = [&](uint32_t id) {
    State s;
    s.v.resize(sys.vars.size());
    const Value* row = res.states.row(id);
    for (size_t c = 0; c < schema.size(); ++c) s.v[schema[c]] = row[c];
    return s;
  };

  std::vector<uint32_t> next;
  while (!frontier.empty()) {
    next.clear();
    for (uint32_t id : frontier) {
      if (opts.max_states && res.states.size() >= opts.max_states) {
        res.complete = false;
        return res;
      }
      if (clock::now() > deadline) {
        res.complete = false;
        return res;
      }
      State pre = materialize(id);
      for (uint32_t ai = 0; ai < sys.actions.size(); ++ai) {
        for (const auto& b : bindings[ai]) {
          if (!action_enabled(sys, inst, pre, ai, b)) continue;
          ++res.transitions;
          State post = apply_action(sys, inst, pre, ai, b);
          auto [pid, fresh] = res.states.insert(post);
          if (fresh) next.push_back(pid);
        }
      }
    }
    if (!next.empty()) ++res.depth;
    frontier.swap(next);
  }
  return res;
}

ProjectionCache::ProjectionCache(const TransitionSystem& sys, const StateSet& full,
                                 uint64_t spec_hash, uint64_t inst_hash,
                                 std::string dir)
    : sys_(sys), full_(full), spec_hash_(spec_hash), inst_hash_(inst_hash),
      dir_(std::move(dir)) {}

const StateSet& ProjectionCache::project(const std::vector<uint32_t>& vars) {
  StateSet probe(sys_, vars);  // normalizes order and duplicates
  std::vector<uint32_t> key = probe.schema();

  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;

  std::string path;
  if (!dir_.empty()) {
    uint64_t schema_hash = kFnvOffset;
    for (const auto& n : probe.schema_names())
      schema_hash = fnv1a64(n.data(), n.size() + 1, schema_hash);
    path = dir_ + "/" + hash_hex(spec_hash_) + "-" + hash_hex(inst_hash_) + "-" +
           hash_hex(schema_hash) + ".proj";
    if (std::filesystem::exists(path)) {
      try {
        StateSet loaded = StateSet::load(path, sys_, spec_hash_, inst_hash_);
        if (loaded.schema() == key)
          return cache_.emplace(std::move(key), std::move(loaded)).first->second;
      } catch (const CacheError&) {
        // Stale or damaged entry: fall through and recompute.
      }
    }
  }

  // Project row by row. Columns of the projection are a subset of the full
  // schema's columns (both are name-sorted).
  StateSet proj(sys_, vars);
  std::vector<int32_t> src_col(proj.width());
  for (size_t c = 0; c < proj.width(); ++c)
    src_col[c] = full_.col_of(proj.schema()[c]);
  std::vector<Value> row(proj.width());
  for (uint32_t i = 0; i < full_.size(); ++i) {
    const Value* src = full_.row(i);
    for (size_t c = 0; c < proj.width(); ++c) row[c] = src[src_col[c]];
    proj.insert_row(row.data());
  }
  ++computed_;

  if (!path.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (!ec) {
      try {
        proj.save(path, spec_hash_, inst_hash_);
      } catch (const CacheError&) {
        // Caching is best-effort; the in-memory result is still good.
      }
    }
  }
  return cache_.emplace(std::move(key), std::move(proj)).first->second;
}

}  // namespace gapslice
