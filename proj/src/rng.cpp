// SPDX-License-Identifier: Apache-2.0
#include "traptp/rng.hpp"

namespace traptp {

namespace {

constexpr uint64_t kGolden = 0x9e3779b97f4a7c15ull;

uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Two finalization rounds over the (key, word) pair; statistically strong
// enough for Monte Carlo work and cheap enough to call per bit.
uint64_t block(uint64_t key, uint64_t word) {
  uint64_t z = mix64(key + kGolden * (word + 1));
  return mix64(z ^ (key ^ 0xd6e8feb86659fd93ull));
}

}  // namespace

RngStream RngStream::from_seed(uint64_t seed) { return RngStream(mix64(seed + kGolden)); }

RngStream RngStream::substream(uint64_t tag) const {
  return RngStream(block(key_ ^ 0xa5a5a5a5a5a5a5a5ull, tag));
}

uint64_t RngStream::next() { return block(key_, counter_++); }

size_t RngStream::index(size_t n) {
  if (n == 0) throw std::invalid_argument("RngStream::index: n == 0");
  if (n == 1) return 0;
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
  for (;;) {
    uint64_t v = next();
    if (v < limit) return static_cast<size_t>(v % n);
  }
}

Perm RngStream::permutation(size_t n) {
  Perm p = Perm::identity(n);
  for (size_t i = n; i > 1; --i) {
    size_t j = index(i);
    std::swap(p.fwd[i - 1], p.fwd[j]);
  }
  return p;
}

}  // namespace traptp
