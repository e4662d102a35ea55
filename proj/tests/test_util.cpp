// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "traptp/bits.hpp"
#include "traptp/rng.hpp"

using namespace traptp;

TEST_CASE("hex codec round-trips and uses two digits per byte") {
  Bits b = {1, 0, 1, 1, 0, 0, 0, 1, 1};
  std::string h = to_hex(pack_bits(b));
  CHECK(from_hex(h) == pack_bits(b));
  CHECK(unpack_bits(pack_bits(b), b.size()) == b);
  CHECK(to_hex({0x0f, 0xa0}) == "0fa0");
  CHECK(from_hex("0fa0") == std::vector<uint8_t>{0x0f, 0xa0});
}

TEST_CASE("bit packing is LSB-first within each byte") {
  Bits b = {1, 0, 0, 0, 0, 0, 0, 0, 1};
  auto packed = pack_bits(b);
  REQUIRE(packed.size() == 2);
  CHECK(packed[0] == 0x01);
  CHECK(packed[1] == 0x01);
}

TEST_CASE("parity and weight") {
  CHECK(parity({}) == 0);
  CHECK(parity({1, 1, 0, 1}) == 1);
  CHECK(weight({1, 1, 0, 1}) == 3);
  Bits a = {1, 0, 1}, b = {1, 1, 0};
  CHECK(bits_xor(a, b) == Bits{0, 1, 1});
  xor_into(a, b);
  CHECK(a == Bits{0, 1, 1});
}

TEST_CASE("permutation apply moves entry j to position fwd[j]") {
  Perm p;
  p.fwd = {2, 0, 1};
  Bits in = {7, 8, 9};
  Bits out = p.apply(in);
  CHECK(out == Bits{8, 9, 7});
  CHECK(p.inverse().apply(out) == in);
  CHECK(Perm::identity(4).apply(Bits{1, 2, 3, 4}) == Bits{1, 2, 3, 4});
}

TEST_CASE("rng streams are deterministic per seed and tag") {
  auto a = RngStream::from_seed(42);
  auto b = RngStream::from_seed(42);
  for (int i = 0; i < 64; ++i) CHECK(a.next() == b.next());
  auto c = RngStream::from_seed(43);
  bool differs = false;
  for (int i = 0; i < 8; ++i) differs |= (a.next() != c.next());
  CHECK(differs);
}

TEST_CASE("substreams do not consume from the parent") {
  auto root = RngStream::from_seed(7);
  auto before = root.counter();
  auto s1 = root.substream(1);
  auto s2 = root.substream(2);
  CHECK(root.counter() == before);
  bool differs = false;
  for (int i = 0; i < 8; ++i) differs |= (s1.next() != s2.next());
  CHECK(differs);
  auto again = RngStream::from_seed(7).substream(1);
  auto s1b = RngStream::from_seed(7).substream(1);
  for (int i = 0; i < 16; ++i) CHECK(again.next() == s1b.next());
}

TEST_CASE("real() lands in [0,1) and looks uniform") {
  auto r = RngStream::from_seed(1234);
  double sum = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double v = r.real();
    REQUIRE(v >= 0.0);
    REQUIRE(v < 1.0);
    sum += v;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("index() is bounded and roughly uniform, including non-power sizes") {
  auto r = RngStream::from_seed(99);
  int counts[7] = {0};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    size_t v = r.index(7);
    REQUIRE(v < 7);
    ++counts[v];
  }
  for (int k = 0; k < 7; ++k) CHECK(counts[k] > n / 7 - 600);
}

TEST_CASE("bit() is balanced") {
  auto r = RngStream::from_seed(5);
  int ones = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) ones += r.bit();
  CHECK(std::abs(ones - n / 2) < 300);
}

TEST_CASE("permutation() emits a valid permutation and mixes") {
  auto r = RngStream::from_seed(17);
  auto p = r.permutation(21);
  std::set<uint32_t> seen(p.fwd.begin(), p.fwd.end());
  CHECK(seen.size() == 21);
  CHECK(*seen.rbegin() == 20);
  // Across many draws, each image should be hit by each source position.
  int hits_0_to_20 = 0;
  for (int i = 0; i < 200; ++i) {
    auto q = r.permutation(21);
    if (q.fwd[0] == 20) ++hits_0_to_20;
  }
  CHECK(hits_0_to_20 > 0);
}

TEST_CASE("bits(n) returns n bits") {
  auto r = RngStream::from_seed(3);
  Bits b = r.bits(21);
  CHECK(b.size() == 21);
  for (auto v : b) CHECK(v <= 1);
}
