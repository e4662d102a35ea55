// SPDX-License-Identifier: Apache-2.0
#include "traptp/bits.hpp"

namespace traptp {

static const char* kHexDigits = "0123456789abcdef";

std::string to_hex(const std::vector<uint8_t>& bytes) {
  std::string out;
  out.reserve(bytes.size() * 2);
  for (uint8_t b : bytes) {
    out.push_back(kHexDigits[b >> 4]);
    out.push_back(kHexDigits[b & 0xf]);
  }
  return out;
}

static int hex_val(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument("from_hex: bad digit");
}

std::vector<uint8_t> from_hex(const std::string& hex) {
  if (hex.size() % 2 != 0) throw std::invalid_argument("from_hex: odd length");
  std::vector<uint8_t> out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>((hex_val(hex[2 * i]) << 4) | hex_val(hex[2 * i + 1]));
  return out;
}

std::vector<uint8_t> pack_bits(const Bits& bits) {
  std::vector<uint8_t> out((bits.size() + 7) / 8, 0);
  for (size_t i = 0; i < bits.size(); ++i)
    if (bits[i] & 1) out[i / 8] |= static_cast<uint8_t>(1u << (i % 8));
  return out;
}

Bits unpack_bits(const std::vector<uint8_t>& bytes, size_t nbits) {
  if (bytes.size() * 8 < nbits) throw std::invalid_argument("unpack_bits: too few bytes");
  Bits out(nbits);
  for (size_t i = 0; i < nbits; ++i) out[i] = (bytes[i / 8] >> (i % 8)) & 1;
  return out;
}

Perm Perm::identity(size_t n) {
  Perm p;
  p.fwd.resize(n);
  for (size_t i = 0; i < n; ++i) p.fwd[i] = static_cast<uint32_t>(i);
  return p;
}

Perm Perm::inverse() const {
  Perm p;
  p.fwd.resize(fwd.size());
  for (size_t i = 0; i < fwd.size(); ++i) p.fwd[fwd[i]] = static_cast<uint32_t>(i);
  return p;
}

Bits Perm::apply(const Bits& in) const {
  if (in.size() != fwd.size()) throw std::invalid_argument("Perm::apply: length mismatch");
  Bits out(in.size());
  for (size_t j = 0; j < in.size(); ++j) out[fwd[j]] = in[j];
  return out;
}

}  // namespace traptp
