// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "traptp/codes.hpp"
#include "traptp/qsim.hpp"

using namespace traptp;
using namespace traptp::codes;
using qsim::Basis;
using qsim::Gate;
using qsim::StateVector;

namespace {

// Independent enumeration of the base code: all 7-bit words annihilated by
// the three checks.  Everything below tests the library against this.
std::vector<Bits> enumerate_codewords() {
  std::vector<Bits> words;
  const auto& checks = CssCode::checks();
  for (int v = 0; v < 128; ++v) {
    Bits w(7);
    for (int i = 0; i < 7; ++i) w[i] = (v >> i) & 1;
    bool ok = true;
    for (const auto& c : checks) {
      int dot = 0;
      for (int i = 0; i < 7; ++i) dot ^= c[i] & w[i];
      if (dot) ok = false;
    }
    if (ok) words.push_back(w);
  }
  return words;
}

StateVector random_qubit(RngStream& rng) {
  StateVector sv(1);
  const Gate pool[] = {Gate::X, Gate::H, Gate::P, Gate::T};
  for (int i = 0; i < 6; ++i) sv.apply_gate(pool[rng.index(4)], 0);
  return sv;
}

size_t word_to_index(const Bits& w) {
  size_t idx = 0;
  for (size_t i = 0; i < w.size(); ++i) idx = (idx << 1) | (w[i] & 1);
  return idx;
}

}  // namespace

TEST_CASE("the base code is the 16-word structure the checks define") {
  auto oracle = enumerate_codewords();
  CHECK(oracle.size() == 16);
  int odd = 0;
  int minw = 7;
  for (const auto& w : oracle) {
    if (parity(w)) ++odd;
    if (weight(w) > 0) minw = std::min<int>(minw, static_cast<int>(weight(w)));
  }
  CHECK(odd == 8);
  CHECK(minw == 3);  // matches the claimed base distance

  auto lib = CssCode::base_codewords();
  CHECK(lib.size() == 16);
  std::set<size_t> a, b;
  for (const auto& w : oracle) a.insert(word_to_index(w));
  for (const auto& w : lib) b.insert(word_to_index(w));
  CHECK(a == b);
  // Even-parity words come first in the library order.
  for (int i = 0; i < 8; ++i) CHECK(parity(lib[i]) == 0);
  for (int i = 8; i < 16; ++i) CHECK(parity(lib[i]) == 1);
}

TEST_CASE("code parameters follow the concatenation rules") {
  CssCode c1(1), c2(2), c3(3);
  CHECK(c1.m() == 7);
  CHECK(c1.distance() == 3);
  CHECK(c1.correctable() == 1);
  CHECK(c2.m() == 49);
  CHECK(c2.distance() == 9);
  CHECK(c2.correctable() == 4);
  CHECK(c3.m() == 343);
  CHECK(c3.distance() == 27);
  CHECK(c1.distance() == 2 * c1.correctable() + 1);
  CHECK(c2.distance() == 2 * c2.correctable() + 1);
}

TEST_CASE("the mixing stage is the advertised linear map, exhaustively") {
  // Apply the CNOT list to every basis word with plain bit arithmetic and
  // compare against the matrix action.
  const auto& cnots = CssCode::encoder_cnots();
  for (int v = 0; v < 128; ++v) {
    Bits in(7);
    for (int i = 0; i < 7; ++i) in[i] = (v >> i) & 1;
    Bits out = in;
    for (auto [c, t] : cnots) out[t] ^= out[c];
    CHECK(CssCode::wire_to_phys_x(in) == out);
    CHECK(CssCode::phys_to_wire_x(out) == in);
  }
}

TEST_CASE("mask transport around the mixing stage matches conjugation on states") {
  auto rng = RngStream::from_seed(61);
  const auto& cnots = CssCode::encoder_cnots();
  for (int trial = 0; trial < 8; ++trial) {
    StateVector base(7);
    for (int i = 0; i < 10; ++i) base.apply_gate(Gate::H, static_cast<int>(rng.index(7)));
    for (int i = 0; i < 6; ++i) base.apply_gate(Gate::T, static_cast<int>(rng.index(7)));
    Bits v = rng.bits(7);

    auto mask_of = [](const Bits& b) {
      uint32_t m = 0;
      for (int i = 0; i < 7; ++i)
        if (b[i]) m |= 1u << i;
      return m;
    };
    auto mix = [&](StateVector s) {
      for (auto [c, t] : cnots) s.apply_cnot(c, t);
      return s;
    };

    // E X^v = X^{Mv} E
    StateVector lhs = base;
    lhs.apply_pauli_mask(mask_of(v), 0);
    lhs = mix(lhs);
    StateVector rhs = mix(base);
    rhs.apply_pauli_mask(mask_of(CssCode::wire_to_phys_x(v)), 0);
    CHECK(qsim::fidelity(lhs, rhs) == doctest::Approx(1.0).epsilon(1e-12));

    // E Z^{M^T v} = Z^v E
    lhs = base;
    lhs.apply_pauli_mask(0, mask_of(CssCode::phys_to_wire_z(v)));
    lhs = mix(lhs);
    rhs = mix(base);
    rhs.apply_pauli_mask(0, mask_of(v));
    CHECK(qsim::fidelity(lhs, rhs) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("encoding a basis state spreads amplitude over one parity class") {
  CssCode code(1);
  auto oracle = enumerate_codewords();
  const double r = 1.0 / std::sqrt(8.0);

  StateVector zero = code.encode(StateVector(1, "0"));
  StateVector one = code.encode(StateVector(1, "1"));
  std::set<size_t> even, odd;
  for (const auto& w : oracle) (parity(w) ? odd : even).insert(word_to_index(w));
  for (size_t idx = 0; idx < 128; ++idx) {
    if (even.count(idx)) {
      CHECK(std::abs(zero.amp(idx) - qsim::cplx(r, 0.0)) < 1e-12);
      CHECK(std::abs(one.amp(idx)) < 1e-12);
    } else if (odd.count(idx)) {
      CHECK(std::abs(one.amp(idx) - qsim::cplx(r, 0.0)) < 1e-12);
      CHECK(std::abs(zero.amp(idx)) < 1e-12);
    } else {
      CHECK(std::abs(zero.amp(idx)) < 1e-12);
      CHECK(std::abs(one.amp(idx)) < 1e-12);
    }
  }
}

TEST_CASE("decode inverts encode for random states") {
  CssCode code(1);
  auto rng = RngStream::from_seed(71);
  for (int trial = 0; trial < 20; ++trial) {
    StateVector psi = random_qubit(rng);
    SyndromeReport rep;
    StateVector out = code.decode(code.encode(psi), rng, &rep);
    CHECK(qsim::fidelity(out, psi) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_FALSE(rep.residual);
    CHECK(rep.x_corrections.empty());
    CHECK(rep.z_corrections.empty());
  }
}

TEST_CASE("every single-position pauli error is corrected") {
  CssCode code(1);
  auto rng = RngStream::from_seed(72);
  for (int trial = 0; trial < 3; ++trial) {
    StateVector psi = random_qubit(rng);
    for (int pos = 0; pos < 7; ++pos) {
      for (int kind = 0; kind < 3; ++kind) {  // X, Z, Y
        StateVector block = code.encode(psi);
        if (kind != 1) block.apply_gate(Gate::X, pos);
        if (kind != 0) block.apply_gate(Gate::Z, pos);
        SyndromeReport rep;
        StateVector out = code.decode(std::move(block), rng, &rep);
        CHECK(qsim::fidelity(out, psi) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK_FALSE(rep.residual);
        if (kind != 1) {
          REQUIRE(rep.x_corrections.size() == 1);
          CHECK(rep.x_corrections[0] == pos);
        }
        if (kind != 0) {
          REQUIRE(rep.z_corrections.size() == 1);
          CHECK(rep.z_corrections[0] == pos);
        }
      }
    }
  }
}

TEST_CASE("a weight-3 flip along a codeword acts as a clean logical flip") {
  CssCode code(1);
  auto rng = RngStream::from_seed(73);
  StateVector block = code.encode(StateVector(1, "0"));
  for (int pos : {0, 1, 2}) block.apply_gate(Gate::X, pos);
  SyndromeReport rep;
  StateVector out = code.decode(std::move(block), rng, &rep);
  CHECK(qsim::fidelity(out, StateVector(1, "1")) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(rep.x_corrections.empty());
  CHECK_FALSE(rep.residual);
}

TEST_CASE("transversal H exchanges the logical basis states") {
  CssCode code(1);
  auto rng = RngStream::from_seed(74);
  StateVector a = code.encode(StateVector(1, "0"));
  for (int i = 0; i < 7; ++i) a.apply_gate(Gate::H, i);
  StateVector b = code.encode(StateVector(1, "+"));
  CHECK(qsim::fidelity(a, b) == doctest::Approx(1.0).epsilon(1e-9));

  StateVector c = code.encode(StateVector(1, "+"));
  for (int i = 0; i < 7; ++i) c.apply_gate(Gate::H, i);
  StateVector out = code.decode(std::move(c), rng);
  CHECK(qsim::fidelity(out, StateVector(1, "0")) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transversal paulis act as logical paulis") {
  CssCode code(1);
  auto rng = RngStream::from_seed(75);
  StateVector psi = random_qubit(rng);
  StateVector block = code.encode(psi);
  for (int i = 0; i < 7; ++i) block.apply_gate(Gate::X, i);
  StateVector out = code.decode(std::move(block), rng);
  StateVector want = psi;
  want.apply_gate(Gate::X, 0);
  CHECK(qsim::fidelity(out, want) == doctest::Approx(1.0).epsilon(1e-9));

  block = code.encode(psi);
  for (int i = 0; i < 7; ++i) block.apply_gate(Gate::Z, i);
  out = code.decode(std::move(block), rng);
  want = psi;
  want.apply_gate(Gate::Z, 0);
  CHECK(qsim::fidelity(out, want) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("transversal cnot between blocks is the logical cnot") {
  CssCode code(1);
  auto rng = RngStream::from_seed(76);
  for (int trial = 0; trial < 5; ++trial) {
    StateVector psi = random_qubit(rng);
    StateVector phi = random_qubit(rng);
    StateVector pair = code.encode(psi);
    pair.append(code.encode(phi));
    for (int i = 0; i < 7; ++i) pair.apply_cnot(i, 7 + i);
    code.decode_at(pair, 7, rng);
    code.decode_at(pair, 0, rng);
    StateVector want = psi;
    want.append(phi);
    want.apply_cnot(0, 1);
    CHECK(qsim::fidelity(pair, want) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("measure-then-decode equals decode-then-measure, exact probabilities") {
  CssCode code(1);
  auto rng = RngStream::from_seed(77);
  for (int trial = 0; trial < 50; ++trial) {
    StateVector psi = random_qubit(rng);
    const double p1_z = std::norm(psi.amp(1));
    StateVector hpsi = psi;
    hpsi.apply_gate(Gate::H, 0);
    const double p1_x = std::norm(hpsi.amp(1));

    StateVector block = code.encode(psi);
    double mass_z = 0.0;
    for (size_t idx = 0; idx < 128; ++idx) {
      Bits w(7);
      for (int i = 0; i < 7; ++i) w[i] = (idx >> (6 - i)) & 1;
      if (code.classical_decode(w) == 1) mass_z += std::norm(block.amp(idx));
    }
    CHECK(std::abs(mass_z - p1_z) < 1e-9);

    for (int i = 0; i < 7; ++i) block.apply_gate(Gate::H, i);
    double mass_x = 0.0;
    for (size_t idx = 0; idx < 128; ++idx) {
      Bits w(7);
      for (int i = 0; i < 7; ++i) w[i] = (idx >> (6 - i)) & 1;
      if (code.classical_decode(w) == 1) mass_x += std::norm(block.amp(idx));
    }
    CHECK(std::abs(mass_x - p1_x) < 1e-9);
  }
}

TEST_CASE("logical one measures to strings that always decode to one") {
  CssCode code(1);
  auto rng = RngStream::from_seed(78);
  for (int trial = 0; trial < 100; ++trial) {
    StateVector block = code.encode(StateVector(1, "1"));
    Bits w(7);
    for (int i = 0; i < 7; ++i) w[i] = static_cast<uint8_t>(block.measure(i, Basis::Z, rng));
    CHECK(code.classical_decode(w) == 1);
  }
}

TEST_CASE("classical decode fixes every error within the packing radius at level 1") {
  CssCode code(1);
  CHECK(code.classical_decode(zero_bits(7)) == 0);
  for (const auto& w : CssCode::base_codewords()) {
    int want = parity(w);
    CHECK(code.classical_decode(w) == want);
    for (int p = 0; p < 7; ++p) {
      Bits e = w;
      e[p] ^= 1;
      CHECK(code.classical_decode(e) == want);
    }
  }
}

TEST_CASE("level-2 classical decode corrects up to four errors") {
  CssCode code(2);
  auto rng = RngStream::from_seed(79);
  CHECK(code.classical_decode(zero_bits(49)) == 0);
  for (int trial = 0; trial < 100; ++trial) {
    int logical = trial & 1;
    Bits w = code.random_codeword(logical, rng);
    REQUIRE(w.size() == 49);
    CHECK(code.classical_decode(w) == logical);
    for (int werr = 1; werr <= code.correctable(); ++werr) {
      Bits e = w;
      // Distinct flip positions.
      std::set<size_t> pos;
      while (static_cast<int>(pos.size()) < werr) pos.insert(rng.index(49));
      for (size_t p : pos) e[p] ^= 1;
      CHECK(code.classical_decode(e) == logical);
    }
  }
}

TEST_CASE("adversarial split error patterns within the radius still decode") {
  // Two flips in each of two sub-blocks defeat naive two-stage decoding but
  // sit within the packing radius; nearest-codeword must fix them.
  CssCode code(2);
  auto rng = RngStream::from_seed(80);
  for (int trial = 0; trial < 50; ++trial) {
    int logical = trial & 1;
    Bits w = code.random_codeword(logical, rng);
    Bits e = w;
    size_t blk_a = rng.index(7), blk_b = (blk_a + 1 + rng.index(6)) % 7;
    e[blk_a * 7 + 0] ^= 1;
    e[blk_a * 7 + 3] ^= 1;
    e[blk_b * 7 + 1] ^= 1;
    e[blk_b * 7 + 5] ^= 1;
    CHECK(code.classical_decode(e) == logical);
  }
}

TEST_CASE("quantum blocks above level 1 are rejected, classical structure is not") {
  CssCode code(2);
  auto rng = RngStream::from_seed(81);
  CHECK_THROWS_AS(code.encode(StateVector(1, "0")), std::length_error);
  Bits w = code.random_codeword(1, rng);
  CHECK(code.classical_decode(w) == 1);
}
