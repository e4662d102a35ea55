// SPDX-License-Identifier: Apache-2.0
#include "traptp/qsim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace traptp::qsim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kTol = 1e-9;
// Amplitudes this close to exact 0/1 are treated as classical bits.
constexpr double kClassicalTol = 1e-12;
}  // namespace

StateVector::StateVector(int n_qubits, std::string_view init) {
  if (n_qubits < 0 || n_qubits > kMaxQubits)
    throw std::length_error("StateVector: qubit count exceeds cap of 24");
  n_ = n_qubits;
  amps_.assign(size_t{1} << n_, cplx(0.0, 0.0));
  size_t idx = 0;
  std::vector<int> plus;
  for (int q = 0; q < n_; ++q) {
    char c = q < static_cast<int>(init.size()) ? init[q] : '0';
    switch (c) {
      case '0': break;
      case '1': idx |= qbit(q); break;
      case '+': plus.push_back(q); break;
      default: throw std::invalid_argument("StateVector: init chars are '0', '1', '+'");
    }
  }
  amps_[idx] = cplx(1.0, 0.0);
  for (int q : plus) apply_gate(Gate::H, q);
}

void StateVector::check_qubit(int q) const {
  if (q < 0 || q >= n_) throw std::out_of_range("StateVector: qubit index");
}

void StateVector::apply_gate(Gate g, int q) {
  check_qubit(q);
  const uint64_t m = qbit(q);
  const size_t d = amps_.size();
  switch (g) {
    case Gate::X:
      for (size_t i = 0; i < d; ++i)
        if (!(i & m)) std::swap(amps_[i], amps_[i | m]);
      break;
    case Gate::Z:
      for (size_t i = 0; i < d; ++i)
        if (i & m) amps_[i] = -amps_[i];
      break;
    case Gate::H:
      for (size_t i = 0; i < d; ++i)
        if (!(i & m)) {
          cplx a = amps_[i], b = amps_[i | m];
          amps_[i] = (a + b) * kInvSqrt2;
          amps_[i | m] = (a - b) * kInvSqrt2;
        }
      break;
    case Gate::P:
      for (size_t i = 0; i < d; ++i)
        if (i & m) amps_[i] *= cplx(0.0, 1.0);
      break;
    case Gate::T: {
      const cplx w(kInvSqrt2, kInvSqrt2);
      for (size_t i = 0; i < d; ++i)
        if (i & m) amps_[i] *= w;
      break;
    }
  }
}

void StateVector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw std::invalid_argument("apply_cnot: control equals target");
  const uint64_t mc = qbit(control), mt = qbit(target);
  const size_t d = amps_.size();
  for (size_t i = 0; i < d; ++i)
    if ((i & mc) && !(i & mt)) std::swap(amps_[i], amps_[i | mt]);
}

void StateVector::apply_pauli_mask(uint32_t xmask, uint32_t zmask) {
  uint64_t xm = 0, zm = 0;
  for (int q = 0; q < n_; ++q) {
    if (xmask & (1u << q)) xm |= qbit(q);
    if (zmask & (1u << q)) zm |= qbit(q);
  }
  const size_t d = amps_.size();
  // X^x Z^z |v> = (-1)^{z.v} |v ^ x>, applied in one pass.
  std::vector<cplx> out(d);
  for (size_t v = 0; v < d; ++v) {
    double sign = (std::popcount(v & zm) & 1) ? -1.0 : 1.0;
    out[v ^ xm] = sign * amps_[v];
  }
  amps_ = std::move(out);
}

int StateVector::measure(int q, Basis basis, RngStream& rng) {
  check_qubit(q);
  if (basis == Basis::X) apply_gate(Gate::H, q);
  const uint64_t m = qbit(q);
  double p1 = 0.0;
  for (size_t i = 0; i < amps_.size(); ++i)
    if (i & m) p1 += std::norm(amps_[i]);
  int outcome;
  if (p1 <= kClassicalTol) outcome = 0;
  else if (p1 >= 1.0 - kClassicalTol) outcome = 1;
  else outcome = rng.real() < p1 ? 1 : 0;
  const double keep = outcome ? p1 : 1.0 - p1;
  const double scale = 1.0 / std::sqrt(keep);
  for (size_t i = 0; i < amps_.size(); ++i) {
    if (((i & m) != 0) != (outcome != 0)) amps_[i] = cplx(0.0, 0.0);
    else amps_[i] *= scale;
  }
  return outcome;
}

std::pair<int, int> StateVector::bell_measure(int q1, int q2, RngStream& rng) {
  apply_cnot(q1, q2);
  apply_gate(Gate::H, q1);
  int a = measure(q2, Basis::Z, rng);
  int b = measure(q1, Basis::Z, rng);
  return {a, b};
}

std::pair<int, int> StateVector::make_epr() {
  int off = append(StateVector(2, "00"));
  apply_gate(Gate::H, off);
  apply_cnot(off, off + 1);
  return {off, off + 1};
}

int StateVector::append(const StateVector& other) {
  if (n_ + other.n_ > kMaxQubits)
    throw std::length_error("StateVector: qubit count exceeds cap of 24");
  const int off = n_;
  std::vector<cplx> out(size_t{1} << (n_ + other.n_));
  const size_t od = other.amps_.size();
  for (size_t i = 0; i < amps_.size(); ++i) {
    if (amps_[i] == cplx(0.0, 0.0)) continue;
    for (size_t j = 0; j < od; ++j) out[i * od + j] = amps_[i] * other.amps_[j];
  }
  n_ += other.n_;
  amps_ = std::move(out);
  return off;
}

int StateVector::measure_pauli(uint32_t xmask, uint32_t zmask, RngStream& rng) {
  if (xmask & zmask) throw std::invalid_argument("measure_pauli: overlapping X and Z support");
  uint64_t xm = 0, zm = 0;
  for (int q = 0; q < n_; ++q) {
    if (xmask & (1u << q)) xm |= qbit(q);
    if (zmask & (1u << q)) zm |= qbit(q);
  }
  const size_t d = amps_.size();
  // <P> with P|v> = (-1)^{z.v} |v ^ x|; the expectation is real.
  double expect = 0.0;
  for (size_t v = 0; v < d; ++v) {
    double sign = (std::popcount(v & zm) & 1) ? -1.0 : 1.0;
    expect += sign * (std::conj(amps_[v ^ xm]) * amps_[v]).real();
  }
  double p0 = std::clamp(0.5 * (1.0 + expect), 0.0, 1.0);
  int outcome;
  if (p0 >= 1.0 - kClassicalTol) outcome = 0;
  else if (p0 <= kClassicalTol) outcome = 1;
  else outcome = rng.real() < p0 ? 0 : 1;
  const double s = outcome ? -1.0 : 1.0;
  std::vector<cplx> out(d);
  for (size_t v = 0; v < d; ++v) {
    double sign = (std::popcount(v & zm) & 1) ? -1.0 : 1.0;
    out[v] = 0.5 * (amps_[v] + s * sign * amps_[v ^ xm]);
  }
  double norm2 = 0.0;
  for (const cplx& a : out) norm2 += std::norm(a);
  const double scale = 1.0 / std::sqrt(norm2);
  for (cplx& a : out) a *= scale;
  amps_ = std::move(out);
  return outcome;
}

void StateVector::permute_qubits(const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != n_)
    throw std::invalid_argument("permute_qubits: permutation size mismatch");
  std::vector<int> seen(n_, 0);
  for (int v : perm) {
    if (v < 0 || v >= n_ || seen[v]++) throw std::invalid_argument("permute_qubits: not a permutation");
  }
  std::vector<cplx> out(amps_.size());
  for (size_t i = 0; i < amps_.size(); ++i) {
    if (amps_[i] == cplx(0.0, 0.0)) continue;
    size_t j = 0;
    for (int q = 0; q < n_; ++q)
      if (i & qbit(q)) j |= 1ull << (n_ - 1 - perm[q]);
    out[j] = amps_[i];
  }
  amps_ = std::move(out);
}

void StateVector::discard(int q) {
  check_qubit(q);
  const uint64_t m = qbit(q);
  const size_t half = amps_.size() / 2;
  // Gather the q=0 and q=1 slices in rest-index order.
  std::vector<cplx> a0(half), a1(half);
  size_t k = 0;
  for (size_t i = 0; i < amps_.size(); ++i) {
    if (i & m) continue;
    a0[k] = amps_[i];
    a1[k] = amps_[i | m];
    ++k;
  }
  double n0 = 0.0, n1 = 0.0;
  for (size_t i = 0; i < half; ++i) {
    n0 += std::norm(a0[i]);
    n1 += std::norm(a1[i]);
  }
  std::vector<cplx>* keep = nullptr;
  if (n1 <= kTol * kTol) keep = &a0;
  else if (n0 <= kTol * kTol) keep = &a1;
  else {
    // Product iff a1 is a scalar multiple of a0.
    size_t imax = 0;
    for (size_t i = 1; i < half; ++i)
      if (std::norm(a0[i]) > std::norm(a0[imax])) imax = i;
    const cplx lambda = a1[imax] / a0[imax];
    for (size_t i = 0; i < half; ++i)
      if (std::abs(a1[i] - lambda * a0[i]) > kTol)
        throw std::logic_error("discard: qubit is entangled with the rest");
    keep = &a0;
  }
  double norm2 = 0.0;
  for (const cplx& a : *keep) norm2 += std::norm(a);
  const double scale = 1.0 / std::sqrt(norm2);
  amps_.resize(half);
  for (size_t i = 0; i < half; ++i) amps_[i] = (*keep)[i] * scale;
  --n_;
}

void StateVector::dump(std::ostream& os) const {
  char buf[96];
  for (size_t i = 0; i < amps_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu %.17g %.17g\n", i, amps_[i].real(), amps_[i].imag());
    os << buf;
  }
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.num_qubits() != b.num_qubits())
    throw std::invalid_argument("fidelity: qubit count mismatch");
  cplx ip(0.0, 0.0);
  for (size_t i = 0; i < a.dim(); ++i) ip += std::conj(a.amp(i)) * b.amp(i);
  return std::norm(ip);
}

// ---------------------------------------------------------------------------
// Register

Qubit Register::alloc(char init) {
  Qubit q = next_qubit_++;
  Factor f;
  f.sv = StateVector(1, std::string_view(&init, 1));
  f.order = {q};
  uint64_t fid = next_factor_++;
  factors_.emplace(fid, std::move(f));
  where_[q] = fid;
  return q;
}

std::pair<Qubit, Qubit> Register::alloc_epr() {
  Qubit a = next_qubit_++, b = next_qubit_++;
  Factor f;
  f.sv = StateVector(0);
  f.sv.make_epr();
  f.order = {a, b};
  uint64_t fid = next_factor_++;
  factors_.emplace(fid, std::move(f));
  where_[a] = fid;
  where_[b] = fid;
  return {a, b};
}

uint64_t Register::factor_of(Qubit q) const {
  auto it = where_.find(q);
  if (it == where_.end()) throw std::out_of_range("Register: unknown or consumed qubit");
  return it->second;
}

int Register::pos_in_factor(const Factor& f, Qubit q) const {
  for (size_t i = 0; i < f.order.size(); ++i)
    if (f.order[i] == q) return static_cast<int>(i);
  throw std::logic_error("Register: qubit missing from its factor");
}

uint64_t Register::merge(const std::vector<Qubit>& qs) {
  std::vector<uint64_t> fids;
  for (Qubit q : qs) {
    uint64_t fid = factor_of(q);
    if (std::find(fids.begin(), fids.end(), fid) == fids.end()) fids.push_back(fid);
  }
  uint64_t dst = fids[0];
  Factor& fd = factors_.at(dst);
  size_t total = fd.order.size();
  for (size_t i = 1; i < fids.size(); ++i) total += factors_.at(fids[i]).order.size();
  if (total > static_cast<size_t>(cap_))
    throw std::length_error("Register: merged factor would exceed the 24-qubit cap");
  for (size_t i = 1; i < fids.size(); ++i) {
    Factor& fs = factors_.at(fids[i]);
    fd.sv.append(fs.sv);
    for (Qubit q : fs.order) {
      fd.order.push_back(q);
      where_[q] = dst;
    }
    factors_.erase(fids[i]);
  }
  return dst;
}

bool Register::classical_value(Qubit q, int* bit_out) const {
  auto it = where_.find(q);
  if (it == where_.end()) return false;
  const Factor& f = factors_.at(it->second);
  if (f.order.size() != 1) return false;
  const cplx a0 = f.sv.amp(0), a1 = f.sv.amp(1);
  if (std::abs(a1) <= kClassicalTol && std::abs(std::abs(a0) - 1.0) <= kClassicalTol) {
    if (bit_out) *bit_out = 0;
    return true;
  }
  if (std::abs(a0) <= kClassicalTol && std::abs(std::abs(a1) - 1.0) <= kClassicalTol) {
    if (bit_out) *bit_out = 1;
    return true;
  }
  return false;
}

void Register::gate(Gate g, Qubit q) {
  Factor& f = factors_.at(factor_of(q));
  f.sv.apply_gate(g, pos_in_factor(f, q));
  ++counters_.gates;
}

void Register::cnot(Qubit control, Qubit target) {
  ++counters_.cnots;
  int bit = 0;
  if (classical_value(control, &bit)) {
    if (bit) {
      Factor& f = factors_.at(factor_of(target));
      f.sv.apply_gate(Gate::X, pos_in_factor(f, target));
    }
    return;
  }
  uint64_t fid = merge({control, target});
  Factor& f = factors_.at(fid);
  f.sv.apply_cnot(pos_in_factor(f, control), pos_in_factor(f, target));
}

void Register::pauli_product(const std::vector<Qubit>& xs, const std::vector<Qubit>& zs) {
  for (Qubit q : xs) {
    Factor& f = factors_.at(factor_of(q));
    f.sv.apply_gate(Gate::X, pos_in_factor(f, q));
  }
  for (Qubit q : zs) {
    Factor& f = factors_.at(factor_of(q));
    f.sv.apply_gate(Gate::Z, pos_in_factor(f, q));
  }
  ++counters_.pauli_ops;
}

int Register::measure(Qubit q, Basis basis, RngStream& rng) {
  ++counters_.measurements;
  uint64_t fid = factor_of(q);
  Factor& f = factors_.at(fid);
  int pos = pos_in_factor(f, q);
  int outcome = f.sv.measure(pos, basis, rng);
  if (f.order.size() > 1) split_classical(fid, q, outcome);
  return outcome;
}

void Register::split_classical(uint64_t fid, Qubit q, int bit) {
  Factor& f = factors_.at(fid);
  int pos = pos_in_factor(f, q);
  f.sv.discard(pos);
  f.order.erase(f.order.begin() + pos);
  Factor single;
  single.sv = StateVector(1, bit ? "1" : "0");
  single.order = {q};
  uint64_t nfid = next_factor_++;
  factors_.emplace(nfid, std::move(single));
  where_[q] = nfid;
}

int Register::measure_pauli(const std::vector<Qubit>& xs, const std::vector<Qubit>& zs,
                            RngStream& rng) {
  ++counters_.pauli_measurements;
  std::vector<Qubit> all = xs;
  all.insert(all.end(), zs.begin(), zs.end());
  uint64_t fid = merge(all);
  Factor& f = factors_.at(fid);
  uint32_t xm = 0, zm = 0;
  for (Qubit q : xs) xm |= 1u << pos_in_factor(f, q);
  for (Qubit q : zs) zm |= 1u << pos_in_factor(f, q);
  return f.sv.measure_pauli(xm, zm, rng);
}

void Register::discard(Qubit q) {
  ++counters_.discards;
  uint64_t fid = factor_of(q);
  Factor& f = factors_.at(fid);
  if (f.order.size() == 1) {
    factors_.erase(fid);
  } else {
    int pos = pos_in_factor(f, q);
    f.sv.discard(pos);
    f.order.erase(f.order.begin() + pos);
  }
  where_.erase(q);
}

size_t Register::factor_size(Qubit q) const { return factors_.at(factor_of(q)).order.size(); }

StateVector Register::snapshot(const std::vector<Qubit>& qs) const {
  std::vector<uint64_t> fids;
  for (Qubit q : qs) {
    uint64_t fid = factor_of(q);
    if (std::find(fids.begin(), fids.end(), fid) == fids.end()) fids.push_back(fid);
  }
  size_t total = 0;
  std::vector<Qubit> layout;
  StateVector joint(0);
  for (uint64_t fid : fids) {
    const Factor& f = factors_.at(fid);
    total += f.order.size();
    if (total > static_cast<size_t>(StateVector::kMaxQubits))
      throw std::length_error("snapshot: joint state exceeds the 24-qubit cap");
    joint.append(f.sv);
    layout.insert(layout.end(), f.order.begin(), f.order.end());
  }
  if (layout.size() != qs.size())
    throw std::invalid_argument("snapshot: qubit list must cover whole factors");
  std::vector<int> perm(layout.size());
  for (size_t i = 0; i < layout.size(); ++i) {
    auto it = std::find(qs.begin(), qs.end(), layout[i]);
    if (it == qs.end()) throw std::invalid_argument("snapshot: qubit list must cover whole factors");
    perm[i] = static_cast<int>(it - qs.begin());
  }
  joint.permute_qubits(perm);
  return joint;
}

}  // namespace traptp::qsim
