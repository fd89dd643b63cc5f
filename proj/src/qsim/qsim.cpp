#include "zkpos/qsim/qsim.hpp"

#include <algorithm>
#include <cmath>

namespace zkpos::qsim {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
}

std::uint32_t QuantumArena::new_factor(std::vector<std::uint32_t> qubits, std::vector<Amplitude> amp) {
  std::uint32_t idx;
  if (!free_factors_.empty()) {
    idx = free_factors_.back();
    free_factors_.pop_back();
  } else {
    idx = static_cast<std::uint32_t>(factors_.size());
    factors_.emplace_back();
  }
  Factor& f = factors_[idx];
  f.qubits = std::move(qubits);
  f.amp = std::move(amp);
  f.in_use = true;
  for (auto q : f.qubits) records_[q].factor = idx;
  return idx;
}

std::uint32_t QuantumArena::new_qubit() {
  if (live_ >= capacity_) throw QsimError("register budget exceeded");
  const auto id = static_cast<std::uint32_t>(records_.size());
  records_.push_back({0, true});
  ++live_;
  ++created_;
  return id;
}

const QuantumArena::Record& QuantumArena::live_record(QubitHandle q) const {
  if (q.id >= records_.size()) throw QsimError("unknown qubit handle");
  const Record& r = records_[q.id];
  if (!r.live) throw QsimError("qubit handle already consumed");
  return r;
}

int QuantumArena::position(const Factor& f, std::uint32_t qubit) const {
  auto it = std::find(f.qubits.begin(), f.qubits.end(), qubit);
  return static_cast<int>(it - f.qubits.begin());
}

QubitHandle QuantumArena::prepare_bb84(int b, int theta) {
  const auto id = new_qubit();
  std::vector<Amplitude> amp(2);
  if (theta == 0) {
    amp[b & 1] = 1.0;
  } else {
    amp[0] = kInvSqrt2;
    amp[1] = (b & 1) ? -kInvSqrt2 : kInvSqrt2;
  }
  new_factor({id}, std::move(amp));
  return {id};
}

std::pair<QubitHandle, QubitHandle> QuantumArena::make_epr() {
  if (live_ + 2 > capacity_) throw QsimError("register budget exceeded");
  const auto a = new_qubit();
  const auto b = new_qubit();
  std::vector<Amplitude> amp(4);
  amp[0] = kInvSqrt2;
  amp[3] = kInvSqrt2;
  new_factor({a, b}, std::move(amp));
  return {{a}, {b}};
}

std::uint32_t QuantumArena::merge(std::uint32_t fa, std::uint32_t fb) {
  if (fa == fb) return fa;
  Factor& a = factors_[fa];
  Factor& b = factors_[fb];
  if (a.qubits.size() + b.qubits.size() > kMaxFactorQubits) throw QsimError("register budget exceeded");
  const std::size_t na = a.amp.size();
  std::vector<Amplitude> amp(na * b.amp.size());
  for (std::size_t j = 0; j < b.amp.size(); ++j) {
    for (std::size_t i = 0; i < na; ++i) amp[i | j * na] = a.amp[i] * b.amp[j];
  }
  std::vector<std::uint32_t> qubits = a.qubits;
  qubits.insert(qubits.end(), b.qubits.begin(), b.qubits.end());
  a.in_use = false;
  b.in_use = false;
  free_factors_.push_back(fa);
  free_factors_.push_back(fb);
  return new_factor(std::move(qubits), std::move(amp));
}

void QuantumArena::hadamard(Factor& f, int pos) {
  const std::size_t bit = std::size_t{1} << pos;
  for (std::size_t i = 0; i < f.amp.size(); ++i) {
    if (i & bit) continue;
    const Amplitude a0 = f.amp[i];
    const Amplitude a1 = f.amp[i | bit];
    f.amp[i] = (a0 + a1) * kInvSqrt2;
    f.amp[i | bit] = (a0 - a1) * kInvSqrt2;
  }
}

void QuantumArena::pauli_x(Factor& f, int pos) {
  const std::size_t bit = std::size_t{1} << pos;
  for (std::size_t i = 0; i < f.amp.size(); ++i) {
    if (!(i & bit)) std::swap(f.amp[i], f.amp[i | bit]);
  }
}

void QuantumArena::pauli_z(Factor& f, int pos) {
  const std::size_t bit = std::size_t{1} << pos;
  for (std::size_t i = 0; i < f.amp.size(); ++i) {
    if (i & bit) f.amp[i] = -f.amp[i];
  }
}

void QuantumArena::cnot(Factor& f, int control, int target) {
  const std::size_t c = std::size_t{1} << control;
  const std::size_t t = std::size_t{1} << target;
  for (std::size_t i = 0; i < f.amp.size(); ++i) {
    if ((i & c) && !(i & t)) std::swap(f.amp[i], f.amp[i | t]);
  }
}

void QuantumArena::check_norm(const Factor& f) const {
  double sum = 0;
  for (const auto& a : f.amp) sum += std::norm(a);
  if (std::abs(sum - 1.0) > kNormTolerance) throw QsimError("state norm drifted beyond tolerance");
}

int QuantumArena::measure_computational(std::uint32_t qubit, Rng& rng) {
  const std::uint32_t fi = records_[qubit].factor;
  Factor& f = factors_[fi];
  const int pos = position(f, qubit);
  const std::size_t bit = std::size_t{1} << pos;
  double p1 = 0;
  for (std::size_t i = 0; i < f.amp.size(); ++i) {
    if (i & bit) p1 += std::norm(f.amp[i]);
  }
  p1 = std::clamp(p1, 0.0, 1.0);
  const int outcome = rng.uniform01() < p1 ? 1 : 0;
  const double p = outcome ? p1 : 1.0 - p1;
  const double scale = 1.0 / std::sqrt(p);

  // Collapse and factor the measured qubit out.
  std::vector<Amplitude> reduced(f.amp.size() / 2);
  const std::size_t low_mask = bit - 1;
  for (std::size_t r = 0; r < reduced.size(); ++r) {
    const std::size_t full = (r & low_mask) | ((r & ~low_mask) << 1) | (outcome ? bit : 0);
    reduced[r] = f.amp[full] * scale;
  }
  f.amp = std::move(reduced);
  f.qubits.erase(f.qubits.begin() + pos);
  records_[qubit].live = false;
  --live_;
  if (f.qubits.empty()) {
    f.in_use = false;
    free_factors_.push_back(fi);
  } else {
    check_norm(f);
  }
  return outcome;
}

int QuantumArena::measure(QubitHandle q, int basis, Rng& rng) {
  const Record& r = live_record(q);
  if (basis & 1) {
    Factor& f = factors_[r.factor];
    hadamard(f, position(f, q.id));
  }
  return measure_computational(q.id, rng);
}

BellOutcome QuantumArena::bell_measure(QubitHandle q1, QubitHandle q2, Rng& rng) {
  if (q1 == q2) throw QsimError("bell_measure needs two distinct qubits");
  const std::uint32_t fa = live_record(q1).factor;
  const std::uint32_t fb = live_record(q2).factor;
  const std::uint32_t fi = merge(fa, fb);
  Factor& f = factors_[fi];
  cnot(f, position(f, q1.id), position(f, q2.id));
  hadamard(f, position(f, q1.id));
  check_norm(f);
  BellOutcome out;
  out.z = measure_computational(q1.id, rng);
  out.x = measure_computational(q2.id, rng);
  return out;
}

void QuantumArena::apply_pauli(QubitHandle q, int x, int z) {
  const Record& r = live_record(q);
  Factor& f = factors_[r.factor];
  const int pos = position(f, q.id);
  if (x & 1) pauli_x(f, pos);
  if (z & 1) pauli_z(f, pos);
  check_norm(f);
}

void QuantumArena::discard(QubitHandle q, Rng& rng) {
  live_record(q);
  measure_computational(q.id, rng);
}

bool QuantumArena::is_live(QubitHandle q) const { return q.id < records_.size() && records_[q.id].live; }

FactorSnapshot QuantumArena::snapshot(QubitHandle q) const {
  const Record& r = live_record(q);
  const Factor& f = factors_[r.factor];
  FactorSnapshot s;
  for (auto id : f.qubits) s.qubits.push_back({id});
  s.amplitudes = f.amp;
  return s;
}

}  // namespace zkpos::qsim
