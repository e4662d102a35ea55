// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string_view>
#include <vector>

#include "traptp/rng.hpp"

namespace traptp::qsim {

using cplx = std::complex<double>;

enum class Gate { X, Z, H, P, T };
enum class Basis { Z, X };

// Pure-state simulator over at most kMaxQubits qubits.  Qubit 0 is the most
// significant index bit, so |q0 q1 ...> reads left to right: for a 2-qubit
// register, |01> is amplitude index 1 and |10> is index 2.  Appended qubits
// (make_epr, append) take the next higher qubit numbers.
class StateVector {
 public:
  static constexpr int kMaxQubits = 24;

  StateVector() { amps_ = {cplx(1.0, 0.0)}; }
  // init holds one of '0', '1', '+' per qubit; missing positions default '0'.
  explicit StateVector(int n_qubits, std::string_view init = {});

  int num_qubits() const { return n_; }
  size_t dim() const { return amps_.size(); }
  const std::vector<cplx>& amps() const { return amps_; }
  cplx& amp(size_t i) { return amps_[i]; }
  const cplx& amp(size_t i) const { return amps_[i]; }

  void apply_gate(Gate g, int q);
  void apply_cnot(int control, int target);
  // One-pass X^x Z^z where bit q of xmask/zmask addresses qubit q.
  void apply_pauli_mask(uint32_t xmask, uint32_t zmask);

  // Projective measurement.  Basis::X is Hadamard-then-computational: the
  // measured qubit is retained, collapsed to classical |outcome>.
  int measure(int q, Basis basis, RngStream& rng);

  // Measures the Bell basis of (q1, q2): CNOT(q1->q2), H(q1), then both in Z.
  // Returns (a, b) = (outcome of q2, outcome of q1); teleporting through an
  // EPR pair, the far half is recovered by the correction X^a Z^b.  On a
  // fresh EPR pair this yields (0,0) with probability 1.
  std::pair<int, int> bell_measure(int q1, int q2, RngStream& rng);

  // Appends two qubits in (|00>+|11>)/sqrt(2); returns their indices.
  std::pair<int, int> make_epr();
  // Tensor-extends this register; returns the index offset of other's qubits.
  int append(const StateVector& other);

  // Projectively measures the Pauli product X^{xmask} Z^{zmask} (masks must
  // not overlap).  Returns 0 for the +1 eigenspace, 1 for -1, and collapses.
  int measure_pauli(uint32_t xmask, uint32_t zmask, RngStream& rng);

  // Relabels qubits: qubit j moves to position perm[j].
  void permute_qubits(const std::vector<int>& perm);

  // Removes qubit q, which must be unentangled with the rest (up to 1e-9).
  void discard(int q);

  // Writes "index re im" lines, 17 significant digits.
  void dump(std::ostream& os) const;

 private:
  uint64_t qbit(int q) const { return 1ull << (n_ - 1 - q); }
  void check_qubit(int q) const;

  int n_ = 0;
  std::vector<cplx> amps_;
};

double fidelity(const StateVector& a, const StateVector& b);

// Operation counters used by the verification-cost accounting.
struct OpCounters {
  uint64_t gates = 0;
  uint64_t cnots = 0;
  uint64_t pauli_ops = 0;
  uint64_t measurements = 0;
  uint64_t pauli_measurements = 0;
  uint64_t discards = 0;

  uint64_t total() const {
    return gates + cnots + pauli_ops + measurements + pauli_measurements + discards;
  }
};

using Qubit = uint64_t;

// Qubit store over a product of independent StateVector factors.  Factors
// merge when an operation spans them and split when measurement makes a
// qubit classical, so a register can hold far more qubits than the per-factor
// cap as long as entanglement stays bounded.  All randomness flows through
// caller-provided RngStream instances.
class Register {
 public:
  explicit Register(int factor_cap = StateVector::kMaxQubits) : cap_(factor_cap) {}

  Qubit alloc(char init);
  std::pair<Qubit, Qubit> alloc_epr();
  // Admit an externally prepared state as fresh qubits, one per state qubit.
  std::vector<Qubit> alloc_state(const StateVector& sv);

  void gate(Gate g, Qubit q);
  void cnot(Qubit control, Qubit target);
  // X on each of xs and Z on each of zs, counted as a single operation.
  void pauli_product(const std::vector<Qubit>& xs, const std::vector<Qubit>& zs);

  int measure(Qubit q, Basis basis, RngStream& rng);
  // Pauli-product measurement; xs and zs must not share qubits.
  int measure_pauli(const std::vector<Qubit>& xs, const std::vector<Qubit>& zs, RngStream& rng);

  void discard(Qubit q);

  // True when q is a lone factor holding an exact computational basis state.
  bool classical_value(Qubit q, int* bit_out) const;

  // Materializes the joint state of qs, which must exactly cover whole
  // factors; qubit order in the result follows qs.
  StateVector snapshot(const std::vector<Qubit>& qs) const;

  bool contains(Qubit q) const { return where_.count(q) != 0; }
  size_t live_qubits() const { return where_.size(); }
  size_t factor_size(Qubit q) const;
  const OpCounters& counters() const { return counters_; }
  void reset_counters() { counters_ = OpCounters{}; }

 private:
  struct Factor {
    StateVector sv;
    std::vector<Qubit> order;
  };

  uint64_t factor_of(Qubit q) const;
  int pos_in_factor(const Factor& f, Qubit q) const;
  // Merges all factors containing qs into one; returns its id.
  uint64_t merge(const std::vector<Qubit>& qs);
  void split_classical(uint64_t fid, Qubit q, int bit);

  int cap_;
  uint64_t next_qubit_ = 1;
  uint64_t next_factor_ = 1;
  std::map<uint64_t, Factor> factors_;
  std::map<Qubit, uint64_t> where_;
  OpCounters counters_;
};

}  // namespace traptp::qsim
