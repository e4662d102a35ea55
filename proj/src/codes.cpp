// SPDX-License-Identifier: Apache-2.0
#include "traptp/codes.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace traptp::codes {

namespace {

// Bit p of these masks refers to block position p.
constexpr uint8_t kR1 = 0x55;       // 0,2,4,6
constexpr uint8_t kR2 = 0x66;       // 1,2,5,6
constexpr uint8_t kR3 = 0x78;       // 3,4,5,6
constexpr uint8_t kLogical = 0x34;  // 2,4,5, the odd-parity coset rep

// Columns of the mixing matrix M: position image of each input wire.
// Wires 0,1,3 carry the check rows, wire 2 carries the logical rep, wires
// 4,5,6 pass through.
constexpr uint8_t kMCols[7] = {kR1, kR2, kLogical, kR3, 0x10, 0x20, 0x40};

// Rows of M^-1: wire i recovered as the parity of these positions.
constexpr uint8_t kMinvRows[7] = {0x01, 0x02, 0x07, 0x08, 0x1e, 0x2d, 0x4b};

uint8_t pack7(const Bits& v) {
  uint8_t out = 0;
  for (int i = 0; i < 7; ++i)
    if (v[i] & 1) out |= uint8_t(1u << i);
  return out;
}

Bits unpack7(uint8_t v) {
  Bits out(7);
  for (int i = 0; i < 7; ++i) out[i] = (v >> i) & 1;
  return out;
}

uint8_t mul_cols(const uint8_t cols[7], uint8_t v) {
  uint8_t out = 0;
  for (int j = 0; j < 7; ++j)
    if (v & (1u << j)) out ^= cols[j];
  return out;
}

uint8_t mul_rows(const uint8_t rows[7], uint8_t v) {
  uint8_t out = 0;
  for (int i = 0; i < 7; ++i)
    if (std::popcount(uint8_t(rows[i] & v)) & 1) out |= uint8_t(1u << i);
  return out;
}

size_t pow7(int level) {
  size_t m = 1;
  for (int i = 0; i < level; ++i) m *= 7;
  return m;
}

}  // namespace

CssCode::CssCode(int level) : level_(level) {
  if (level < 1) throw std::invalid_argument("CssCode: level must be >= 1");
  m_ = pow7(level);
  d_ = 1;
  for (int i = 0; i < level; ++i) d_ *= 3;
}

const std::array<Bits, 3>& CssCode::checks() {
  static const std::array<Bits, 3> v = {unpack7(kR1), unpack7(kR2), unpack7(kR3)};
  return v;
}

const Bits& CssCode::logical_rep() {
  static const Bits v = unpack7(kLogical);
  return v;
}

const std::vector<Bits>& CssCode::base_codewords() {
  static const std::vector<Bits> words = [] {
    std::vector<Bits> even, odd;
    for (uint8_t a = 0; a < 8; ++a) {
      uint8_t w = 0;
      if (a & 1) w ^= kR1;
      if (a & 2) w ^= kR2;
      if (a & 4) w ^= kR3;
      even.push_back(unpack7(w));
      odd.push_back(unpack7(uint8_t(w ^ kLogical)));
    }
    even.insert(even.end(), odd.begin(), odd.end());
    return even;
  }();
  return words;
}

const std::vector<std::pair<int, int>>& CssCode::encoder_cnots() {
  static const std::vector<std::pair<int, int>> list = {
      {2, 4}, {2, 5}, {0, 2}, {0, 4}, {0, 6},
      {1, 2}, {1, 5}, {1, 6}, {3, 4}, {3, 5}, {3, 6}};
  return list;
}

Bits CssCode::wire_to_phys_x(const Bits& v) { return unpack7(mul_cols(kMCols, pack7(v))); }
Bits CssCode::phys_to_wire_x(const Bits& v) { return unpack7(mul_rows(kMinvRows, pack7(v))); }
// Row i of M^T is column i of M, and (M^-1)^T likewise.
Bits CssCode::phys_to_wire_z(const Bits& v) { return unpack7(mul_rows(kMCols, pack7(v))); }
Bits CssCode::wire_to_phys_z(const Bits& v) { return unpack7(mul_cols(kMinvRows, pack7(v))); }

qsim::StateVector CssCode::encode(const qsim::StateVector& psi) const {
  if (psi.num_qubits() != 1) throw std::invalid_argument("encode: input must be one qubit");
  if (level_ != 1)
    throw std::length_error("encode: block size above level 1 exceeds the state-vector cap");
  qsim::StateVector block(2, "++");
  block.append(psi);
  block.append(qsim::StateVector(4, "+000"));
  for (auto [c, t] : encoder_cnots()) block.apply_cnot(c, t);
  return block;
}

void CssCode::decode_at(qsim::StateVector& sv, int offset, RngStream& rng,
                        SyndromeReport* report) const {
  if (level_ != 1)
    throw std::length_error("decode: block size above level 1 exceeds the state-vector cap");
  if (offset < 0 || offset + 7 > sv.num_qubits())
    throw std::out_of_range("decode_at: block out of range");
  SyndromeReport local;
  SyndromeReport& rep = report ? *report : local;
  rep = SyndromeReport{};

  auto stab_mask = [&](uint8_t support) {
    uint32_t mask = 0;
    for (int p = 0; p < 7; ++p)
      if (support & (1u << p)) mask |= 1u << (offset + p);
    return mask;
  };
  const uint8_t rows[3] = {kR1, kR2, kR3};

  // X stabilizers flag Z errors; the three outcomes spell position+1.
  int sz = 0;
  for (int k = 0; k < 3; ++k) {
    int o = sv.measure_pauli(stab_mask(rows[k]), 0, rng);
    rep.z_syndrome.push_back(uint8_t(o));
    sz |= o << k;
  }
  if (sz) {
    sv.apply_gate(qsim::Gate::Z, offset + sz - 1);
    rep.z_corrections.push_back(sz - 1);
  }
  int sx = 0;
  for (int k = 0; k < 3; ++k) {
    int o = sv.measure_pauli(0, stab_mask(rows[k]), rng);
    rep.x_syndrome.push_back(uint8_t(o));
    sx |= o << k;
  }
  if (sx) {
    sv.apply_gate(qsim::Gate::X, offset + sx - 1);
    rep.x_corrections.push_back(sx - 1);
  }

  const auto& cnots = encoder_cnots();
  for (auto it = cnots.rbegin(); it != cnots.rend(); ++it)
    sv.apply_cnot(offset + it->first, offset + it->second);
  for (int w : {0, 1, 3}) sv.apply_gate(qsim::Gate::H, offset + w);
  for (int w : {0, 1, 3, 4, 5, 6})
    if (sv.measure(offset + w, qsim::Basis::Z, rng) != 0) rep.residual = true;
  for (int w : {6, 5, 4, 3, 1, 0}) sv.discard(offset + w);
}

qsim::StateVector CssCode::decode(qsim::StateVector block, RngStream& rng,
                                  SyndromeReport* report) const {
  if (block.num_qubits() != static_cast<int>(m_))
    throw std::invalid_argument("decode: block size mismatch");
  decode_at(block, 0, rng, report);
  return block;
}

std::pair<int, int> CssCode::base_class_distances(const Bits& word) {
  uint8_t w = pack7(word);
  int d0 = 7, d1 = 7;
  for (uint8_t a = 0; a < 8; ++a) {
    uint8_t c = 0;
    if (a & 1) c ^= kR1;
    if (a & 2) c ^= kR2;
    if (a & 4) c ^= kR3;
    d0 = std::min(d0, std::popcount(uint8_t(c ^ w)));
    d1 = std::min(d1, std::popcount(uint8_t(c ^ kLogical ^ w)));
  }
  return {d0, d1};
}

std::pair<int, int> CssCode::class_distances(const Bits& word, size_t off, int level) const {
  if (level == 1) {
    Bits sub(word.begin() + off, word.begin() + off + 7);
    return base_class_distances(sub);
  }
  const size_t sub_m = pow7(level - 1);
  std::pair<int, int> sub_d[7];
  for (int j = 0; j < 7; ++j) sub_d[j] = class_distances(word, off + j * sub_m, level - 1);
  int best[2] = {INT32_MAX, INT32_MAX};
  for (uint8_t a = 0; a < 16; ++a) {
    uint8_t c = 0;
    if (a & 1) c ^= kR1;
    if (a & 2) c ^= kR2;
    if (a & 4) c ^= kR3;
    if (a & 8) c ^= kLogical;
    int cost = 0;
    for (int j = 0; j < 7; ++j) cost += (c & (1u << j)) ? sub_d[j].second : sub_d[j].first;
    int parity = std::popcount(c) & 1;
    best[parity] = std::min(best[parity], cost);
  }
  return {best[0], best[1]};
}

int CssCode::classical_decode(const Bits& word) const {
  if (word.size() != m_) throw std::invalid_argument("classical_decode: length mismatch");
  auto [d0, d1] = class_distances(word, 0, level_);
  return d1 < d0 ? 1 : 0;
}

Bits CssCode::random_codeword(int logical, RngStream& rng) const {
  // Level-1 word with the requested parity, then recurse per position.
  uint8_t w = 0;
  if (rng.bit()) w ^= kR1;
  if (rng.bit()) w ^= kR2;
  if (rng.bit()) w ^= kR3;
  if (logical & 1) w ^= kLogical;
  Bits outer = unpack7(w);
  if (level_ == 1) return outer;
  CssCode sub(level_ - 1);
  Bits out;
  out.reserve(m_);
  for (int j = 0; j < 7; ++j) {
    Bits b = sub.random_codeword(outer[j], rng);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

}  // namespace traptp::codes
