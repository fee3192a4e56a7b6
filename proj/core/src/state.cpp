// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#include "gapslice/state.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "gapslice/util/hash.hpp"

namespace gapslice {

namespace {

constexpr char kMagic[6] = {'G', 'A', 'P', 'R', '1', '\n'};

void put_u64(Bytes& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

uint64_t get_u64(const uint8_t* p) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(p[i]) << (8 * i);
  return v;
}

void put_str(Bytes& out, std::string_view s) {
  put_varint(out, s.size());
  out.insert(out.end(), s.begin(), s.end());
}

}  // namespace

StateSet::StateSet(const TransitionSystem& sys, std::vector<uint32_t> vars) {
  std::sort(vars.begin(), vars.end(), [&](uint32_t a, uint32_t b) {
    return sys.vars[a].name < sys.vars[b].name;
  });
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  schema_ = std::move(vars);
  var_to_col_.assign(sys.vars.size(), -1);
  for (size_t c = 0; c < schema_.size(); ++c) {
    schema_names_.push_back(sys.vars[schema_[c]].name);
    schema_types_.push_back(sys.vars[schema_[c]].type);
    var_to_col_[schema_[c]] = static_cast<int32_t>(c);
  }
}

StateSet StateSet::full(const TransitionSystem& sys) {
  std::vector<uint32_t> all(sys.vars.size());
  for (uint32_t i = 0; i < all.size(); ++i) all[i] = i;
  return StateSet(sys, std::move(all));
}

std::pair<uint32_t, bool> StateSet::insert(const State& s) {
  // Gather the projection into scratch storage, then defer to insert_row.
  scratch_.clear();
  for (uint32_t v : schema_) scratch_.push_back(s.v[v]);
  return insert_row(scratch_.data());
}

std::pair<uint32_t, bool> StateSet::insert_row(const Value* row) {
  Bytes enc;
  for (size_t c = 0; c < width(); ++c) row[c].encode(enc);
  return insert_encoded(row, enc);
}

std::pair<uint32_t, bool> StateSet::insert_encoded(const Value* row, const Bytes& enc) {
  uint64_t h = fnv1a64(enc.data(), enc.size());
  auto& bucket = index_[h];
  std::string_view enc_view(reinterpret_cast<const char*>(enc.data()), enc.size());
  for (uint32_t id : bucket)
    if (encoding(id) == enc_view) return {id, false};
  uint32_t id = static_cast<uint32_t>(count_);
  rows_.insert(rows_.end(), row, row + width());
  enc_arena_.insert(enc_arena_.end(), enc.begin(), enc.end());
  offsets_.push_back(enc_arena_.size());
  bucket.push_back(id);
  ++count_;
  return {id, true};
}

std::string_view StateSet::encoding(uint32_t i) const {
  return std::string_view(reinterpret_cast<const char*>(enc_arena_.data()) + offsets_[i],
                          offsets_[i + 1] - offsets_[i]);
}

std::optional<uint32_t> StateSet::find_encoding(std::string_view enc) const {
  uint64_t h = fnv1a64(enc.data(), enc.size());
  auto it = index_.find(h);
  if (it == index_.end()) return std::nullopt;
  for (uint32_t id : it->second)
    if (encoding(id) == enc) return id;
  return std::nullopt;
}

std::vector<uint32_t> StateSet::canonical_order() const {
  std::vector<uint32_t> ids(count_);
  for (uint32_t i = 0; i < count_; ++i) ids[i] = i;
  std::sort(ids.begin(), ids.end(),
            [this](uint32_t a, uint32_t b) { return encoding(a) < encoding(b); });
  return ids;
}

void StateSet::save(const std::string& path, uint64_t spec_hash, uint64_t inst_hash) const {
  Bytes body;
  put_u64(body, spec_hash);
  put_u64(body, inst_hash);
  put_varint(body, width());
  for (size_t c = 0; c < width(); ++c) {
    put_str(body, schema_names_[c]);
    put_str(body, schema_types_[c].to_string());
  }
  put_varint(body, count_);
  for (uint32_t id : canonical_order()) {
    std::string_view enc = encoding(id);
    put_varint(body, enc.size());
    body.insert(body.end(), enc.begin(), enc.end());
  }

  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheError("cannot write '" + tmp + "'");
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(body.data()),
              static_cast<std::streamsize>(body.size()));
    Bytes sum;
    put_u64(sum, fnv1a64(body.data(), body.size()));
    out.write(reinterpret_cast<const char*>(sum.data()),
              static_cast<std::streamsize>(sum.size()));
    if (!out) throw CacheError("short write to '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CacheError("cannot replace '" + path + "'");
}

StateSet StateSet::load(const std::string& path, const TransitionSystem& sys,
                        std::optional<uint64_t> spec_hash,
                        std::optional<uint64_t> inst_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CacheError("cannot open '" + path + "'");
  Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (data.size() < sizeof(kMagic) + 8 ||
      std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0)
    throw CacheError("'" + path + "' is not a state cache file");
  size_t body_len = data.size() - sizeof(kMagic) - 8;
  const uint8_t* body = data.data() + sizeof(kMagic);
  uint64_t want_sum = get_u64(body + body_len);
  if (fnv1a64(body, body_len) != want_sum)
    throw CacheError("'" + path + "' is corrupt (checksum mismatch)");

  try {
    ByteReader rd(body, body_len);
    uint64_t got_spec = get_u64(body);
    uint64_t got_inst = get_u64(body + 8);
    rd.view(16);
    if (spec_hash && got_spec != *spec_hash)
      throw CacheError("'" + path + "' was built from a different protocol definition");
    if (inst_hash && got_inst != *inst_hash)
      throw CacheError("'" + path + "' was built from a different instance");

    uint64_t w = rd.varint();
    std::vector<uint32_t> vars;
    for (uint64_t c = 0; c < w; ++c) {
      uint64_t nl = rd.varint();
      std::string name(reinterpret_cast<const char*>(rd.view(nl)), nl);
      uint64_t tl = rd.varint();
      std::string tstr(reinterpret_cast<const char*>(rd.view(tl)), tl);
      auto vi = sys.var_index(name);
      if (!vi)
        throw CacheError("'" + path + "' mentions unknown variable '" + name + "'");
      if (sys.vars[*vi].type.to_string() != tstr)
        throw CacheError("'" + path + "' disagrees on the type of '" + name + "'");
      vars.push_back(*vi);
    }

    StateSet set(sys, vars);
    if (set.width() != w)
      throw CacheError("'" + path + "' has duplicate schema variables");
    uint64_t n = rd.varint();
    std::vector<Value> row(w);
    for (uint64_t i = 0; i < n; ++i) {
      uint64_t el = rd.varint();
      ByteReader er(rd.view(el), el);
      for (uint64_t c = 0; c < w; ++c) row[c] = Value::decode(er);
      if (!er.done()) throw CacheError("'" + path + "' has trailing state bytes");
      set.insert_row(row.data());
    }
    if (!rd.done()) throw CacheError("'" + path + "' has trailing bytes");
    return set;
  } catch (const CacheError&) {
    throw;
  } catch (const std::runtime_error& e) {
    // ByteReader truncation and similar decode failures.
    throw CacheError(std::string(e.what()) + " in '" + path + "'");
  }
}

}  // namespace gapslice
