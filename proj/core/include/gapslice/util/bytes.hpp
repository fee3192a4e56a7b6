// Part of the gapslice project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
#ifndef GAPSLICE_UTIL_BYTES_HPP
#define GAPSLICE_UTIL_BYTES_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapslice {

using Bytes = std::vector<uint8_t>;

/// LEB128-style unsigned varint. All canonical encodings (values, states,
/// cache files) go through these two functions so the byte layout has a
/// single definition.
inline void put_varint(Bytes& out, uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<uint8_t>(v));
}

class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t size) : p_(data), end_(data + size) {}
  explicit ByteReader(const Bytes& b) : ByteReader(b.data(), b.size()) {}

  uint64_t varint() {
    uint64_t v = 0;
    int shift = 0;
    while (true) {
      if (p_ == end_) throw std::runtime_error("byte stream truncated");
      uint8_t b = *p_++;
      v |= static_cast<uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
      if (shift > 63) throw std::runtime_error("varint too long");
    }
  }

  uint8_t byte() {
    if (p_ == end_) throw std::runtime_error("byte stream truncated");
    return *p_++;
  }

  void raw(void* dst, size_t n) {
    if (static_cast<size_t>(end_ - p_) < n) throw std::runtime_error("byte stream truncated");
    std::copy(p_, p_ + n, static_cast<uint8_t*>(dst));
    p_ += n;
  }

  /// Zero-copy read: returns a pointer to the next n bytes and skips them.
  const uint8_t* view(size_t n) {
    if (static_cast<size_t>(end_ - p_) < n) throw std::runtime_error("byte stream truncated");
    const uint8_t* p = p_;
    p_ += n;
    return p;
  }

  bool done() const { return p_ == end_; }
  size_t remaining() const { return static_cast<size_t>(end_ - p_); }

 private:
  const uint8_t* p_;
  const uint8_t* end_;
};

}  // namespace gapslice

#endif  // GAPSLICE_UTIL_BYTES_HPP
