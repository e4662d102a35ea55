// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "traptp/bits.hpp"
#include "traptp/rng.hpp"

namespace traptp::clcrypto {

// 64-bit FNV-1a, the digest used for log entries.  Integrity against honest
// mistakes and byte corruption, not against a crypto adversary.
uint64_t fnv1a64(const uint8_t* data, size_t len);
inline uint64_t fnv1a64(const std::vector<uint8_t>& v) { return fnv1a64(v.data(), v.size()); }

// --- MAC -------------------------------------------------------------------

// 128-bit key, 128-bit tag, 4-round ARX sponge over 64-bit words.
// Deterministic; reference vectors live in data/mac_vectors.txt.
struct MacKey {
  uint64_t k0 = 0, k1 = 0;
  static MacKey random(RngStream& rng) { return {rng.next(), rng.next()}; }
};

struct SignedMessage {
  std::vector<uint8_t> message;
  std::vector<uint8_t> tag;  // 16 bytes
};

std::vector<uint8_t> mac_tag(const MacKey& k, const std::vector<uint8_t>& m);
SignedMessage mac_sign(const MacKey& k, const std::vector<uint8_t>& m);
bool mac_verify(const MacKey& k, const SignedMessage& sm);

// --- Homomorphic evaluation registry ----------------------------------------

// Plaintext semantics of every function the evaluator may run homomorphically.
// Each function maps (public params, input bit-strings) to output bit-strings
// and throws std::invalid_argument on malformed inputs.
using HeFunction =
    std::function<std::vector<Bits>(const std::string& params, const std::vector<Bits>& inputs)>;

// Registered ids: xor, bit-flip-mask, permute, unpermute, cnot-key-update,
// t-key-update, tc-verdec-measurement, expand-bit.
const std::map<std::string, HeFunction>& he_registry();

// Permutations ride through the registry encoded 8 bits per image, LSB first.
Bits perm_to_bits(const Perm& p);
Perm bits_to_perm(const Bits& b);

// --- Computation log ---------------------------------------------------------

struct LogEntry {
  uint64_t seq = 0;
  std::string kind;             // enc, eval, recrypt, qmeas, gate
  std::string function_id;      // "id(params)" for eval, "-" otherwise
  std::vector<uint64_t> input_refs;
  uint64_t digest = 0;          // fnv1a64 of the canonical payload encoding
  std::vector<uint8_t> payload; // empty when the entry is digest-only
  bool stored = false;
};

// Append-only transcript of one homomorphic evaluation.  Serialized one
// entry per line under a "TRAPTP-LOG v1" header.
class ComputationLog {
 public:
  uint64_t append(LogEntry e);  // assigns seq, computes nothing else
  const std::vector<LogEntry>& entries() const { return entries_; }
  uint64_t next_seq() const { return next_seq_; }

  std::string serialize() const;
  static ComputationLog parse(const std::string& text);  // throws on malformed input

 private:
  std::vector<LogEntry> entries_;
  uint64_t next_seq_ = 1;
};

// --- HE backend ---------------------------------------------------------------

struct HeCiphertext {
  std::string backend;
  std::vector<uint8_t> payload;
  int epoch = 0;
  uint64_t ref = 0;  // seq of the log entry that produced it, 0 if unlogged
};

struct HeKeySet {
  // One opaque string per epoch 0..t.
  std::vector<std::vector<uint8_t>> sk, pk, evk;
  int epochs() const { return static_cast<int>(sk.size()); }
};

// Capability interface a classical HE must provide.  The reference backend
// below is transparent (payload embeds the plaintext): correct, insecure,
// and labeled as such; classical secrecy is out of scope here while the
// epoch, log, and recryption contracts are exercised for real.
class HeBackend {
 public:
  virtual ~HeBackend() = default;
  virtual std::string name() const = 0;
  virtual HeKeySet keygen(int t, RngStream& rng) const = 0;
  virtual HeCiphertext enc(const std::vector<uint8_t>& pk, const Bits& bits, RngStream& rng,
                           ComputationLog* log) const = 0;
  virtual Bits dec(const std::vector<uint8_t>& sk, const HeCiphertext& ct) const = 0;
  virtual std::vector<HeCiphertext> eval(const std::vector<uint8_t>& evk, const std::string& fn,
                                         const std::string& params,
                                         const std::vector<HeCiphertext>& inputs,
                                         ComputationLog* log, bool store_outputs = true) const = 0;
  virtual HeCiphertext recrypt(const HeCiphertext& sk_material, const HeCiphertext& ct,
                               RngStream& rng, ComputationLog* log) const = 0;
  // Pipes the backend's decryption circuit needs in the garden-hose protocol.
  virtual int gardenhose_pipes() const = 0;
};

class TransparentHe final : public HeBackend {
 public:
  std::string name() const override { return "transparent"; }
  HeKeySet keygen(int t, RngStream& rng) const override;
  HeCiphertext enc(const std::vector<uint8_t>& pk, const Bits& bits, RngStream& rng,
                   ComputationLog* log) const override;
  Bits dec(const std::vector<uint8_t>& sk, const HeCiphertext& ct) const override;
  std::vector<HeCiphertext> eval(const std::vector<uint8_t>& evk, const std::string& fn,
                                 const std::string& params,
                                 const std::vector<HeCiphertext>& inputs, ComputationLog* log,
                                 bool store_outputs = true) const override;
  HeCiphertext recrypt(const HeCiphertext& sk_material, const HeCiphertext& ct, RngStream& rng,
                       ComputationLog* log) const override;
  int gardenhose_pipes() const override { return 2; }

  // Plaintext bits visible inside a transparent payload (used by replay).
  static Bits payload_bits(const std::vector<uint8_t>& payload);
  static uint64_t payload_key_id(const std::vector<uint8_t>& payload);
};

TransparentHe& default_backend();

// Convenience entry points mirroring the backend methods.
HeKeySet he_keygen(int t, RngStream& rng);
HeCiphertext he_enc(const std::vector<uint8_t>& pk, const Bits& bits, RngStream& rng,
                    ComputationLog* log = nullptr);
Bits he_dec(const std::vector<uint8_t>& sk, const HeCiphertext& ct);
std::vector<HeCiphertext> he_eval(const std::vector<uint8_t>& evk, const std::string& fn,
                                  const std::string& params,
                                  const std::vector<HeCiphertext>& inputs,
                                  ComputationLog* log = nullptr, bool store_outputs = true);
HeCiphertext he_recrypt(const HeCiphertext& sk_material, const HeCiphertext& ct, RngStream& rng,
                        ComputationLog* log = nullptr);

// Append helpers producing the canonical payload encodings.
uint64_t log_enc_event(ComputationLog& log, const HeCiphertext& ct);
uint64_t log_qmeas(ComputationLog& log, const std::vector<uint8_t>& record);
uint64_t log_gate_claim(ComputationLog& log, const std::string& claim);

// Replays every enc/eval/recrypt entry from stored payloads and recorded
// randomness, checking all digests, and compares the gate-claim sequence
// against `expected_claims`.  Quantum measurement records are digest-checked.
bool check_log(const ComputationLog& log, const std::vector<std::string>& expected_claims);

// Gate-claim strings recorded in a log, in order (used by the verifier).
std::vector<std::string> log_gate_claims(const ComputationLog& log);

}  // namespace traptp::clcrypto
