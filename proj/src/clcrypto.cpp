// SPDX-License-Identifier: Apache-2.0
#include "traptp/clcrypto.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "traptp/codes.hpp"

namespace traptp::clcrypto {

namespace {

constexpr uint64_t kFnvOffset = 0xcbf29ce484222325ull;
constexpr uint64_t kFnvPrime = 0x100000001b3ull;

// input_refs pack (entry seq, output index) so one eval entry can feed
// several later steps with distinct outputs.
constexpr int kRefOutShift = 8;
uint64_t make_ref(uint64_t seq, unsigned out) { return (seq << kRefOutShift) | out; }
uint64_t ref_seq(uint64_t r) { return r >> kRefOutShift; }
unsigned ref_out(uint64_t r) { return static_cast<unsigned>(r & ((1u << kRefOutShift) - 1)); }

void put_u32(std::vector<uint8_t>& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

uint32_t get_u32(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos + 4 > in.size()) throw std::invalid_argument("log payload: truncated u32");
  uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= uint32_t(in[pos + i]) << (8 * i);
  pos += 4;
  return v;
}

void put_u64(std::vector<uint8_t>& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(uint8_t(v >> (8 * i)));
}

uint64_t get_u64(const std::vector<uint8_t>& in, size_t pos) {
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= uint64_t(in[pos + i]) << (8 * i);
  return v;
}

}  // namespace

uint64_t fnv1a64(const uint8_t* data, size_t len) {
  uint64_t h = kFnvOffset;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= kFnvPrime;
  }
  return h;
}

// --- MAC ---------------------------------------------------------------------

namespace {

void mac_round(uint64_t s[4]) {
  s[0] += s[1];
  s[1] = std::rotl(s[1], 13);
  s[1] ^= s[0];
  s[0] = std::rotl(s[0], 32);
  s[2] += s[3];
  s[3] = std::rotl(s[3], 16);
  s[3] ^= s[2];
  s[0] += s[3];
  s[3] = std::rotl(s[3], 21);
  s[3] ^= s[0];
  s[2] += s[1];
  s[1] = std::rotl(s[1], 17);
  s[1] ^= s[2];
  s[2] = std::rotl(s[2], 32);
}

void mac_absorb(uint64_t s[4], uint64_t w) {
  s[3] ^= w;
  for (int r = 0; r < 4; ++r) mac_round(s);
  s[0] ^= w;
}

}  // namespace

std::vector<uint8_t> mac_tag(const MacKey& k, const std::vector<uint8_t>& m) {
  uint64_t s[4] = {k.k0, k.k1, k.k0 ^ 0x736f6d6570736575ull, k.k1 ^ 0x646f72616e646f6dull};
  size_t full = m.size() / 8;
  for (size_t i = 0; i < full; ++i) mac_absorb(s, get_u64(m, i * 8));
  uint64_t last = uint64_t(m.size() & 0xff) << 56;
  for (size_t i = full * 8; i < m.size(); ++i) last |= uint64_t(m[i]) << (8 * (i - full * 8));
  mac_absorb(s, last);
  s[2] ^= 0xee;
  for (int r = 0; r < 4; ++r) mac_round(s);
  uint64_t t0 = s[0] ^ s[1] ^ s[2] ^ s[3];
  s[1] ^= 0xdd;
  for (int r = 0; r < 4; ++r) mac_round(s);
  uint64_t t1 = s[0] ^ s[1] ^ s[2] ^ s[3];
  std::vector<uint8_t> tag;
  put_u64(tag, t0);
  put_u64(tag, t1);
  return tag;
}

SignedMessage mac_sign(const MacKey& k, const std::vector<uint8_t>& m) {
  return {m, mac_tag(k, m)};
}

bool mac_verify(const MacKey& k, const SignedMessage& sm) {
  if (sm.tag.size() != 16) return false;
  auto want = mac_tag(k, sm.message);
  uint8_t acc = 0;
  for (size_t i = 0; i < 16; ++i) acc |= uint8_t(want[i] ^ sm.tag[i]);
  return acc == 0;
}

// --- Registry ------------------------------------------------------------------

Bits perm_to_bits(const Perm& p) {
  Bits out;
  out.reserve(p.size() * 8);
  for (uint32_t img : p.fwd)
    for (int b = 0; b < 8; ++b) out.push_back(uint8_t((img >> b) & 1));
  return out;
}

Perm bits_to_perm(const Bits& b) {
  if (b.size() % 8 != 0) throw std::invalid_argument("permutation encoding: length not 8n");
  size_t n = b.size() / 8;
  Perm p;
  p.fwd.resize(n);
  for (size_t j = 0; j < n; ++j) {
    uint32_t img = 0;
    for (int k = 0; k < 8; ++k) img |= uint32_t(b[j * 8 + k] & 1) << k;
    p.fwd[j] = img;
  }
  std::vector<uint8_t> seen(n, 0);
  for (uint32_t img : p.fwd) {
    if (img >= n || seen[img]++) throw std::invalid_argument("permutation encoding: not a bijection");
  }
  return p;
}

namespace {

size_t parse_size(const std::string& s) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
    throw std::invalid_argument("he params: expected a decimal number");
  return static_cast<size_t>(std::stoull(s));
}

int level_for_m(size_t m) {
  size_t v = 7;
  for (int level = 1; level <= 4; ++level, v *= 7)
    if (v == m) return level;
  throw std::invalid_argument("he params: m is not a power of 7");
}

std::vector<Bits> fn_xor(const std::string&, const std::vector<Bits>& in) {
  if (in.empty()) throw std::invalid_argument("xor: needs at least one input");
  Bits out = in[0];
  for (size_t i = 1; i < in.size(); ++i) xor_into(out, in[i]);
  return {out};
}

std::vector<Bits> fn_bit_flip_mask(const std::string& params, const std::vector<Bits>& in) {
  if (in.size() != 1 && in.size() != 2)
    throw std::invalid_argument("bit-flip-mask: takes (s) or (s, b)");
  Bits mask(params.size());
  for (size_t i = 0; i < params.size(); ++i) {
    if (params[i] != '0' && params[i] != '1')
      throw std::invalid_argument("bit-flip-mask: mask chars must be 0/1");
    mask[i] = uint8_t(params[i] - '0');
  }
  if (in[0].size() != mask.size()) throw std::invalid_argument("bit-flip-mask: length mismatch");
  int cond = 1;
  if (in.size() == 2) {
    if (in[1].size() != 1) throw std::invalid_argument("bit-flip-mask: condition must be one bit");
    cond = in[1][0] & 1;
  }
  Bits out = in[0];
  if (cond) xor_into(out, mask);
  return {out};
}

std::vector<Bits> fn_permute(const std::string& params, const std::vector<Bits>& in, bool forward) {
  size_t n = parse_size(params);
  if (in.size() != 2) throw std::invalid_argument("permute: takes (perm, s)");
  Perm p = bits_to_perm(in[0]);
  if (p.size() != n || in[1].size() != n) throw std::invalid_argument("permute: length mismatch");
  return {forward ? p.apply(in[1]) : p.inverse().apply(in[1])};
}

std::vector<Bits> fn_cnot_key_update(const std::string&, const std::vector<Bits>& in) {
  if (in.size() != 4) throw std::invalid_argument("cnot-key-update: takes (xi, zi, xj, zj)");
  size_t n = in[0].size();
  for (const auto& v : in)
    if (v.size() != n) throw std::invalid_argument("cnot-key-update: length mismatch");
  // Control keeps x, picks up target's z; target keeps z, picks up control's x.
  return {in[0], bits_xor(in[1], in[3]), bits_xor(in[2], in[0]), in[3]};
}

std::vector<Bits> fn_t_key_update(const std::string&, const std::vector<Bits>& in) {
  if (in.size() != 5)
    throw std::invalid_argument("t-key-update: takes (p-flags, alphas, betas, cx, cz)");
  size_t hops = in[0].size();
  if (in[1].size() != hops || in[2].size() != hops)
    throw std::invalid_argument("t-key-update: outcome lists must match hop count");
  if (in[3].size() != 1 || in[4].size() != 1)
    throw std::invalid_argument("t-key-update: cx and cz are single bits");
  int cx = in[3][0] & 1, cz = in[4][0] & 1, p = 0;
  for (size_t k = 0; k < hops; ++k) {
    cx ^= in[1][k] & 1;
    if (in[0][k] & 1) {
      p ^= 1;
      cz ^= cx;  // conjugating the pending X through the twisted link
    }
    cz ^= in[2][k] & 1;
  }
  return {{uint8_t(cx)}, {uint8_t(cz)}, {uint8_t(p)}};
}

std::vector<Bits> fn_verdec_measurement(const std::string& params, const std::vector<Bits>& in) {
  std::istringstream ps(params);
  std::string basis;
  std::string mstr;
  if (!(ps >> basis >> mstr) || (basis != "z" && basis != "x"))
    throw std::invalid_argument("tc-verdec-measurement: params are \"z|x m\"");
  size_t m = parse_size(mstr);
  if (in.size() != 4) throw std::invalid_argument("tc-verdec-measurement: takes (w, x, z, perm)");
  const Bits& w = in[0];
  if (w.size() != 3 * m || in[1].size() != 3 * m || in[2].size() != 3 * m)
    throw std::invalid_argument("tc-verdec-measurement: length mismatch");
  Perm pi = bits_to_perm(in[3]);
  if (pi.size() != 3 * m) throw std::invalid_argument("tc-verdec-measurement: permutation size");
  // Z basis: strip the x pad and check the |0> traps; X basis: strip the z
  // pad and check the |+> traps.  Only one trap family is visible per basis.
  Bits stripped = bits_xor(w, basis == "z" ? in[1] : in[2]);
  Bits unperm = pi.inverse().apply(stripped);
  size_t trap_lo = basis == "z" ? m : 2 * m;
  uint8_t ok = 1;
  for (size_t i = trap_lo; i < trap_lo + m; ++i)
    if (unperm[i]) ok = 0;
  codes::CssCode code(level_for_m(m));
  Bits data(unperm.begin(), unperm.begin() + m);
  uint8_t logical = uint8_t(code.classical_decode(data));
  return {{ok}, {logical}};
}

std::vector<Bits> fn_expand_bit(const std::string& params, const std::vector<Bits>& in) {
  size_t m = parse_size(params);
  if (in.size() != 1 || in[0].size() != 1)
    throw std::invalid_argument("expand-bit: takes one single-bit input");
  Bits out(3 * m, 0);
  for (size_t i = 0; i < m; ++i) out[i] = in[0][0] & 1;
  return {out};
}

}  // namespace

const std::map<std::string, HeFunction>& he_registry() {
  static const std::map<std::string, HeFunction> reg = {
      {"xor", fn_xor},
      {"bit-flip-mask", fn_bit_flip_mask},
      {"permute", [](const std::string& p, const std::vector<Bits>& i) { return fn_permute(p, i, true); }},
      {"unpermute", [](const std::string& p, const std::vector<Bits>& i) { return fn_permute(p, i, false); }},
      {"cnot-key-update", fn_cnot_key_update},
      {"t-key-update", fn_t_key_update},
      {"tc-verdec-measurement", fn_verdec_measurement},
      {"expand-bit", fn_expand_bit},
  };
  return reg;
}

// --- Computation log -------------------------------------------------------------

uint64_t ComputationLog::append(LogEntry e) {
  e.seq = next_seq_++;
  entries_.push_back(std::move(e));
  return entries_.back().seq;
}

namespace {

std::string refs_to_string(const std::vector<uint64_t>& refs) {
  if (refs.empty()) return "-";
  std::string out;
  for (size_t i = 0; i < refs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(ref_seq(refs[i]));
    if (ref_out(refs[i])) {
      out += '.';
      out += std::to_string(ref_out(refs[i]));
    }
  }
  return out;
}

std::vector<uint64_t> refs_from_string(const std::string& s) {
  std::vector<uint64_t> refs;
  if (s == "-") return refs;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t comma = s.find(',', pos);
    std::string tok = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    size_t dot = tok.find('.');
    std::string seq_part = dot == std::string::npos ? tok : tok.substr(0, dot);
    std::string out_part = dot == std::string::npos ? "" : tok.substr(dot + 1);
    if (seq_part.empty() || seq_part.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("log refs: malformed");
    unsigned out_idx = 0;
    if (!out_part.empty()) {
      if (out_part.find_first_not_of("0123456789") != std::string::npos)
        throw std::invalid_argument("log refs: malformed output index");
      unsigned long v = std::stoul(out_part);
      if (v >= (1u << kRefOutShift)) throw std::invalid_argument("log refs: output index too large");
      out_idx = static_cast<unsigned>(v);
    }
    refs.push_back(make_ref(std::stoull(seq_part), out_idx));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return refs;
}

const char* kLogHeader = "TRAPTP-LOG v1";

bool valid_kind(const std::string& k) {
  return k == "enc" || k == "eval" || k == "recrypt" || k == "qmeas" || k == "gate";
}

}  // namespace

std::string ComputationLog::serialize() const {
  std::string out = kLogHeader;
  out += '\n';
  for (const auto& e : entries_) {
    out += std::to_string(e.seq);
    out += '|';
    out += e.kind;
    out += '|';
    out += e.function_id;
    out += '|';
    out += refs_to_string(e.input_refs);
    out += '|';
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(e.digest));
    out += buf;
    out += '|';
    if (e.stored) out += to_hex(e.payload);
    out += '\n';
  }
  return out;
}

ComputationLog ComputationLog::parse(const std::string& text) {
  ComputationLog log;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kLogHeader)
    throw std::invalid_argument("log parse: bad header");
  uint64_t prev_seq = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    size_t pos = 0;
    for (int i = 0; i < 5; ++i) {
      size_t bar = line.find('|', pos);
      if (bar == std::string::npos) throw std::invalid_argument("log parse: missing field");
      fields.push_back(line.substr(pos, bar - pos));
      pos = bar + 1;
    }
    fields.push_back(line.substr(pos));
    if (fields[0].empty() || fields[0].find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("log parse: bad seq");
    LogEntry e;
    try {
      e.seq = std::stoull(fields[0]);
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("log parse: seq out of range");
    }
    if (e.seq <= prev_seq) throw std::invalid_argument("log parse: sequence not increasing");
    prev_seq = e.seq;
    e.kind = fields[1];
    if (!valid_kind(e.kind)) throw std::invalid_argument("log parse: unknown kind");
    e.function_id = fields[2];
    if (e.function_id.empty()) throw std::invalid_argument("log parse: empty function id");
    e.input_refs = refs_from_string(fields[3]);
    if (fields[4].size() != 16 || fields[4].find_first_not_of("0123456789abcdef") != std::string::npos)
      throw std::invalid_argument("log parse: bad digest");
    e.digest = std::stoull(fields[4], nullptr, 16);
    if (!fields[5].empty()) {
      e.payload = from_hex(fields[5]);
      e.stored = true;
    }
    log.entries_.push_back(std::move(e));
    log.next_seq_ = prev_seq + 1;
  }
  return log;
}

// --- Transparent backend -----------------------------------------------------------

namespace {

// Key strings: 3-byte kind tag, 1-byte epoch, 8-byte key id.
std::vector<uint8_t> make_key(const char* tag, int epoch, uint64_t id) {
  std::vector<uint8_t> k(tag, tag + 3);
  k.push_back(uint8_t(epoch));
  put_u64(k, id);
  return k;
}

void check_key(const std::vector<uint8_t>& k, const char* tag) {
  if (k.size() != 12 || std::memcmp(k.data(), tag, 3) != 0)
    throw std::invalid_argument("transparent he: malformed key");
}

int key_epoch(const std::vector<uint8_t>& k) { return k[3]; }
uint64_t key_id(const std::vector<uint8_t>& k) { return get_u64(k, 4); }

// Ciphertext payload: 8-byte key id, 8-byte nonce, bit count, packed bits.
std::vector<uint8_t> make_payload(uint64_t id, uint64_t nonce, const Bits& bits) {
  std::vector<uint8_t> p;
  put_u64(p, id);
  put_u64(p, nonce);
  put_u32(p, uint32_t(bits.size()));
  auto packed = pack_bits(bits);
  p.insert(p.end(), packed.begin(), packed.end());
  return p;
}

// Ciphertext encoding inside log payloads: 1-byte epoch, length, payload.
void encode_ct(std::vector<uint8_t>& out, const HeCiphertext& ct) {
  out.push_back(uint8_t(ct.epoch));
  put_u32(out, uint32_t(ct.payload.size()));
  out.insert(out.end(), ct.payload.begin(), ct.payload.end());
}

HeCiphertext decode_ct(const std::vector<uint8_t>& in, size_t& pos) {
  if (pos >= in.size()) throw std::invalid_argument("log payload: truncated ciphertext");
  HeCiphertext ct;
  ct.backend = "transparent";
  ct.epoch = in[pos++];
  uint32_t len = get_u32(in, pos);
  if (pos + len > in.size()) throw std::invalid_argument("log payload: truncated ciphertext body");
  ct.payload.assign(in.begin() + pos, in.begin() + pos + len);
  pos += len;
  return ct;
}

uint64_t derive_eval_nonce(const std::string& fn, const std::string& params,
                           const std::vector<HeCiphertext>& inputs, unsigned out_idx) {
  std::vector<uint8_t> seed(fn.begin(), fn.end());
  seed.push_back(0);
  seed.insert(seed.end(), params.begin(), params.end());
  seed.push_back(0);
  for (const auto& ct : inputs) {
    put_u32(seed, uint32_t(ct.payload.size()));
    seed.insert(seed.end(), ct.payload.begin(), ct.payload.end());
  }
  seed.push_back(uint8_t(out_idx));
  return fnv1a64(seed);
}

// Shared by the production eval path and log replay so they cannot drift.
struct EvalResult {
  std::vector<HeCiphertext> outs;
  std::vector<uint8_t> encoding;  // canonical eval log payload
};

EvalResult run_eval(const std::string& fn, const std::string& params,
                    const std::vector<HeCiphertext>& inputs) {
  auto it = he_registry().find(fn);
  if (it == he_registry().end()) throw std::invalid_argument("he eval: unknown function id");
  if (inputs.empty()) throw std::invalid_argument("he eval: needs at least one input");
  const int epoch = inputs[0].epoch;
  const uint64_t id = TransparentHe::payload_key_id(inputs[0].payload);
  std::vector<Bits> plain;
  for (const auto& ct : inputs) {
    if (ct.epoch != epoch) throw std::invalid_argument("he eval: epoch mismatch among inputs");
    if (TransparentHe::payload_key_id(ct.payload) != id)
      throw std::invalid_argument("he eval: inputs under different keys");
    plain.push_back(TransparentHe::payload_bits(ct.payload));
  }
  std::vector<Bits> outs = it->second(params, plain);
  EvalResult r;
  put_u32(r.encoding, uint32_t(params.size()));
  r.encoding.insert(r.encoding.end(), params.begin(), params.end());
  put_u32(r.encoding, uint32_t(outs.size()));
  for (unsigned k = 0; k < outs.size(); ++k) {
    HeCiphertext ct;
    ct.backend = "transparent";
    ct.epoch = epoch;
    ct.payload = make_payload(id, derive_eval_nonce(fn, params, inputs, k), outs[k]);
    encode_ct(r.encoding, ct);
    r.outs.push_back(std::move(ct));
  }
  return r;
}

}  // namespace

Bits TransparentHe::payload_bits(const std::vector<uint8_t>& payload) {
  if (payload.size() < 20) throw std::invalid_argument("transparent he: malformed payload");
  size_t pos = 16;
  uint32_t nbits = get_u32(payload, pos);
  if (payload.size() != 20 + (nbits + 7) / 8)
    throw std::invalid_argument("transparent he: payload length mismatch");
  return unpack_bits({payload.begin() + 20, payload.end()}, nbits);
}

uint64_t TransparentHe::payload_key_id(const std::vector<uint8_t>& payload) {
  if (payload.size() < 8) throw std::invalid_argument("transparent he: malformed payload");
  return get_u64(payload, 0);
}

HeKeySet TransparentHe::keygen(int t, RngStream& rng) const {
  if (t < 0) throw std::invalid_argument("he keygen: epoch count must be >= 0");
  HeKeySet ks;
  for (int i = 0; i <= t; ++i) {
    uint64_t id = rng.next();
    ks.sk.push_back(make_key("TSK", i, id));
    ks.pk.push_back(make_key("TPK", i, id));
    ks.evk.push_back(make_key("TEV", i, id));
  }
  return ks;
}

HeCiphertext TransparentHe::enc(const std::vector<uint8_t>& pk, const Bits& bits, RngStream& rng,
                                ComputationLog* log) const {
  check_key(pk, "TPK");
  HeCiphertext ct;
  ct.backend = "transparent";
  ct.epoch = key_epoch(pk);
  ct.payload = make_payload(key_id(pk), rng.next(), bits);
  if (log) ct.ref = make_ref(log_enc_event(*log, ct), 0);
  return ct;
}

Bits TransparentHe::dec(const std::vector<uint8_t>& sk, const HeCiphertext& ct) const {
  check_key(sk, "TSK");
  if (ct.epoch != key_epoch(sk)) throw std::invalid_argument("transparent he: epoch mismatch");
  if (payload_key_id(ct.payload) != key_id(sk))
    throw std::invalid_argument("transparent he: wrong key");
  return payload_bits(ct.payload);
}

std::vector<HeCiphertext> TransparentHe::eval(const std::vector<uint8_t>& evk,
                                              const std::string& fn, const std::string& params,
                                              const std::vector<HeCiphertext>& inputs,
                                              ComputationLog* log, bool store_outputs) const {
  check_key(evk, "TEV");
  for (const auto& ct : inputs)
    if (ct.epoch != key_epoch(evk)) throw std::invalid_argument("he eval: epoch mismatch with evk");
  EvalResult r = run_eval(fn, params, inputs);
  for (auto& ct : r.outs)
    if (payload_key_id(ct.payload) != key_id(evk))
      throw std::invalid_argument("he eval: inputs under a different key than evk");
  if (log) {
    LogEntry e;
    e.kind = "eval";
    e.function_id = fn + "(" + params + ")";
    for (const auto& ct : inputs) e.input_refs.push_back(ct.ref);
    e.digest = fnv1a64(r.encoding);
    if (store_outputs) {
      e.payload = r.encoding;
      e.stored = true;
    }
    uint64_t seq = log->append(std::move(e));
    for (unsigned k = 0; k < r.outs.size(); ++k) r.outs[k].ref = make_ref(seq, k);
  }
  return r.outs;
}

HeCiphertext TransparentHe::recrypt(const HeCiphertext& sk_material, const HeCiphertext& ct,
                                    RngStream& rng, ComputationLog* log) const {
  if (sk_material.epoch != ct.epoch + 1)
    throw std::invalid_argument("he recrypt: material must sit one epoch above the ciphertext");
  Bits sk_bits = payload_bits(sk_material.payload);
  if (sk_bits.size() != 12 * 8) throw std::invalid_argument("he recrypt: material is not a key");
  auto sk_prev = pack_bits(sk_bits);
  check_key(sk_prev, "TSK");
  if (key_epoch(sk_prev) != ct.epoch || key_id(sk_prev) != payload_key_id(ct.payload))
    throw std::invalid_argument("he recrypt: material does not open the ciphertext");
  HeCiphertext out;
  out.backend = "transparent";
  out.epoch = ct.epoch + 1;
  out.payload = make_payload(payload_key_id(sk_material.payload), rng.next(),
                             payload_bits(ct.payload));
  if (log) {
    LogEntry e;
    e.kind = "recrypt";
    e.function_id = "-";
    e.input_refs = {ct.ref, sk_material.ref};
    std::vector<uint8_t> enc;
    encode_ct(enc, out);
    e.digest = fnv1a64(enc);
    e.payload = std::move(enc);
    e.stored = true;
    out.ref = make_ref(log->append(std::move(e)), 0);
  }
  return out;
}

TransparentHe& default_backend() {
  static TransparentHe b;
  return b;
}

HeKeySet he_keygen(int t, RngStream& rng) { return default_backend().keygen(t, rng); }
HeCiphertext he_enc(const std::vector<uint8_t>& pk, const Bits& bits, RngStream& rng,
                    ComputationLog* log) {
  return default_backend().enc(pk, bits, rng, log);
}
Bits he_dec(const std::vector<uint8_t>& sk, const HeCiphertext& ct) {
  return default_backend().dec(sk, ct);
}
std::vector<HeCiphertext> he_eval(const std::vector<uint8_t>& evk, const std::string& fn,
                                  const std::string& params,
                                  const std::vector<HeCiphertext>& inputs, ComputationLog* log,
                                  bool store_outputs) {
  return default_backend().eval(evk, fn, params, inputs, log, store_outputs);
}
HeCiphertext he_recrypt(const HeCiphertext& sk_material, const HeCiphertext& ct, RngStream& rng,
                        ComputationLog* log) {
  return default_backend().recrypt(sk_material, ct, rng, log);
}

uint64_t log_enc_event(ComputationLog& log, const HeCiphertext& ct) {
  LogEntry e;
  e.kind = "enc";
  e.function_id = "-";
  encode_ct(e.payload, ct);
  e.digest = fnv1a64(e.payload);
  e.stored = true;
  return log.append(std::move(e));
}

uint64_t log_qmeas(ComputationLog& log, const std::vector<uint8_t>& record) {
  LogEntry e;
  e.kind = "qmeas";
  e.function_id = "-";
  e.payload = record;
  e.digest = fnv1a64(e.payload);
  e.stored = true;
  return log.append(std::move(e));
}

uint64_t log_gate_claim(ComputationLog& log, const std::string& claim) {
  LogEntry e;
  e.kind = "gate";
  e.function_id = "-";
  e.payload.assign(claim.begin(), claim.end());
  e.digest = fnv1a64(e.payload);
  e.stored = true;
  return log.append(std::move(e));
}

std::vector<std::string> log_gate_claims(const ComputationLog& log) {
  std::vector<std::string> claims;
  for (const auto& e : log.entries())
    if (e.kind == "gate") claims.emplace_back(e.payload.begin(), e.payload.end());
  return claims;
}

bool check_log(const ComputationLog& log, const std::vector<std::string>& expected_claims) {
  // seq -> reconstructed output ciphertexts (or opaque record bytes).
  std::map<uint64_t, std::vector<HeCiphertext>> values;
  std::vector<std::string> claims;
  auto resolve = [&](uint64_t ref) -> const HeCiphertext* {
    auto it = values.find(ref_seq(ref));
    if (it == values.end() || ref_out(ref) >= it->second.size()) return nullptr;
    return &it->second[ref_out(ref)];
  };
  for (const auto& e : log.entries()) {
    try {
      if (e.kind == "enc" || e.kind == "qmeas" || e.kind == "gate") {
        if (!e.stored || fnv1a64(e.payload) != e.digest) return false;
        if (e.kind == "enc") {
          size_t pos = 0;
          HeCiphertext ct = decode_ct(e.payload, pos);
          if (pos != e.payload.size()) return false;
          values[e.seq] = {std::move(ct)};
        } else if (e.kind == "gate") {
          claims.emplace_back(e.payload.begin(), e.payload.end());
        }
      } else if (e.kind == "eval") {
        size_t open = e.function_id.find('(');
        if (open == std::string::npos || e.function_id.back() != ')') return false;
        std::string fn = e.function_id.substr(0, open);
        std::string params = e.function_id.substr(open + 1, e.function_id.size() - open - 2);
        std::vector<HeCiphertext> inputs;
        for (uint64_t r : e.input_refs) {
          const HeCiphertext* ct = resolve(r);
          if (!ct) return false;
          inputs.push_back(*ct);
        }
        EvalResult r = run_eval(fn, params, inputs);
        if (fnv1a64(r.encoding) != e.digest) return false;
        if (e.stored && e.payload != r.encoding) return false;
        values[e.seq] = std::move(r.outs);
      } else if (e.kind == "recrypt") {
        if (!e.stored || fnv1a64(e.payload) != e.digest) return false;
        if (e.input_refs.size() != 2) return false;
        const HeCiphertext* in_ct = resolve(e.input_refs[0]);
        const HeCiphertext* mat = resolve(e.input_refs[1]);
        if (!in_ct || !mat) return false;
        size_t pos = 0;
        HeCiphertext out = decode_ct(e.payload, pos);
        if (pos != e.payload.size()) return false;
        if (out.epoch != in_ct->epoch + 1 || mat->epoch != out.epoch) return false;
        Bits sk_bits = TransparentHe::payload_bits(mat->payload);
        if (sk_bits.size() != 12 * 8) return false;
        auto sk_prev = pack_bits(sk_bits);
        if (key_epoch(sk_prev) != in_ct->epoch ||
            key_id(sk_prev) != TransparentHe::payload_key_id(in_ct->payload))
          return false;
        if (TransparentHe::payload_key_id(out.payload) !=
            TransparentHe::payload_key_id(mat->payload))
          return false;
        if (TransparentHe::payload_bits(out.payload) != TransparentHe::payload_bits(in_ct->payload))
          return false;
        values[e.seq] = {std::move(out)};
      } else {
        return false;
      }
    } catch (const std::invalid_argument&) {
      return false;
    }
  }
  return claims == expected_claims;
}

}  // namespace traptp::clcrypto
