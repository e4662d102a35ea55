// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace traptp {

// Bit strings are stored one bit per byte (values 0 or 1).  Sizes here are
// small (a few hundred bits at most), so clarity beats packing.
using Bits = std::vector<uint8_t>;

inline Bits zero_bits(size_t n) { return Bits(n, 0); }

inline void xor_into(Bits& a, const Bits& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_into: length mismatch");
  for (size_t i = 0; i < a.size(); ++i) a[i] ^= b[i];
}

inline Bits bits_xor(Bits a, const Bits& b) {
  xor_into(a, b);
  return a;
}

inline int parity(const Bits& a) {
  int p = 0;
  for (uint8_t v : a) p ^= (v & 1);
  return p;
}

inline size_t weight(const Bits& a) {
  size_t w = 0;
  for (uint8_t v : a) w += (v & 1);
  return w;
}

std::string to_hex(const std::vector<uint8_t>& bytes);
std::vector<uint8_t> from_hex(const std::string& hex);

// Packs one bit per byte into real bytes (LSB first) and back; used by the
// serialization layer and the log payload encoding.
std::vector<uint8_t> pack_bits(const Bits& bits);
Bits unpack_bits(const std::vector<uint8_t>& bytes, size_t nbits);

// A permutation of {0,...,n-1}.  fwd[j] is the image of j: an object at
// pre-permutation index j lands at position fwd[j].
struct Perm {
  std::vector<uint32_t> fwd;

  size_t size() const { return fwd.size(); }
  static Perm identity(size_t n);
  Perm inverse() const;

  // permute(bits)[fwd[j]] = bits[j]
  Bits apply(const Bits& in) const;
};

}  // namespace traptp
