// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "traptp/bits.hpp"
#include "traptp/qsim.hpp"
#include "traptp/rng.hpp"

namespace traptp::codes {

// Corrections applied (or attempted) during a quantum decode.
struct SyndromeReport {
  Bits x_syndrome;                 // from Z-stabilizer outcomes, flags X errors
  Bits z_syndrome;                 // from X-stabilizer outcomes, flags Z errors
  std::vector<int> x_corrections;  // block positions where X was applied
  std::vector<int> z_corrections;
  // Set when unencoding leaves a non-zero ancilla wire, i.e. the input was
  // not a codeword with a correctable Pauli error.
  bool residual = false;
};

// Self-dual CSS code built by concatenating the 7-qubit code with itself.
// Level L has m = 7^L physical qubits per logical qubit, distance d = 3^L,
// and corrects d_c = (d-1)/2 errors.  Quantum encode/decode work at L=1
// (larger blocks exceed the state-vector cap); classical decoding works at
// every level.
class CssCode {
 public:
  explicit CssCode(int level = 1);

  int level() const { return level_; }
  size_t m() const { return m_; }
  int distance() const { return d_; }
  int correctable() const { return (d_ - 1) / 2; }

  // One logical qubit into an m-qubit block.  The logical wire sits at
  // block position 2 before the mixing stage; logical X and Z on the block
  // are the transversal X^{x7} and Z^{x7}.
  qsim::StateVector encode(const qsim::StateVector& psi) const;

  // Projective stabilizer measurement, correction, unencode.  Leaves the
  // logical qubit as the only survivor of the block.
  qsim::StateVector decode(qsim::StateVector block, RngStream& rng,
                           SyndromeReport* report = nullptr) const;

  // Same, operating on qubits [offset, offset+m) of a larger state; the
  // logical qubit ends at index `offset` after the ancilla wires are
  // discarded.
  void decode_at(qsim::StateVector& sv, int offset, RngStream& rng,
                 SyndromeReport* report = nullptr) const;

  // Nearest-codeword decode of an m-bit Z-measurement string to the logical
  // bit.  Exact minimum-distance at every level; ties cannot occur at
  // weight <= correctable().
  int classical_decode(const Bits& word) const;

  // Uniformly random m-bit codeword carrying the given logical bit.
  Bits random_codeword(int logical, RngStream& rng) const;

  // Classical structure of the base code (level 1).
  // The three parity checks; also the X- and Z-stabilizer supports.
  static const std::array<Bits, 3>& checks();
  // All 16 base codewords, even-parity first.
  static const std::vector<Bits>& base_codewords();
  // The odd-parity coset representative (logical X support for one wire).
  static const Bits& logical_rep();

  // The mixing stage of the encoder as an explicit CNOT list
  // (control, target) on block positions.  Basis-linear: |v> -> |Mv>.
  static const std::vector<std::pair<int, int>>& encoder_cnots();

  // The F2 action of the mixing stage and its inverse/transposes, used to
  // carry Pauli masks between the physical block and the unmixed wires.
  //   E X^v E^dag = X^{Mv}        E^dag X^v E = X^{M^-1 v}
  //   E Z^{M^T v} E^dag = Z^v     E^dag Z^v E = Z^{M^T v}
  static Bits wire_to_phys_x(const Bits& v);  // M v
  static Bits phys_to_wire_x(const Bits& v);  // M^-1 v
  static Bits phys_to_wire_z(const Bits& v);  // M^T v
  static Bits wire_to_phys_z(const Bits& v);  // (M^-1)^T v

 private:
  // Minimum distance from `word` to a base codeword of each parity class.
  static std::pair<int, int> base_class_distances(const Bits& word);
  // Recursive distances for one level-`level` block starting at `off`.
  std::pair<int, int> class_distances(const Bits& word, size_t off, int level) const;

  int level_;
  size_t m_;
  int d_;
};

}  // namespace traptp::codes
