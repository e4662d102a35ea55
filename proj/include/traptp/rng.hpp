// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "traptp/bits.hpp"

namespace traptp {

// Counter-based deterministic random stream.  A stream is (key, counter);
// draw i of a stream depends only on the key and i, so identical seeds give
// bit-identical runs and substreams can be derived without consuming draws.
class RngStream {
 public:
  RngStream() : key_(0), counter_(0) {}
  explicit RngStream(uint64_t key) : key_(key), counter_(0) {}

  static RngStream from_seed(uint64_t seed);

  // Independent stream addressed by (this stream's key, tag).  Derivation
  // does not advance the parent counter.
  RngStream substream(uint64_t tag) const;

  uint64_t next();
  int bit() { return static_cast<int>(next() & 1); }
  // Uniform in [0,1), 53 bits of precision.
  double real() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // Uniform in {0,...,n-1} via rejection, exact.
  size_t index(size_t n);

  Bits bits(size_t n) {
    Bits out(n);
    for (auto& b : out) b = static_cast<uint8_t>(bit());
    return out;
  }

  // Fisher-Yates, uniform over permutations.
  Perm permutation(size_t n);

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_;
};

}  // namespace traptp
