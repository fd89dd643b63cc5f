#include <gtest/gtest.h>

#include <array>
#include <cmath>

#include "zkpos/qsim/qsim.hpp"

using namespace zkpos;
using namespace zkpos::qsim;

namespace {

constexpr double kEps = 1e-12;

void expect_amps(const FactorSnapshot& s, std::complex<double> a0, std::complex<double> a1) {
  ASSERT_EQ(s.amplitudes.size(), 2u);
  EXPECT_NEAR(std::abs(s.amplitudes[0] - a0), 0.0, kEps);
  EXPECT_NEAR(std::abs(s.amplitudes[1] - a1), 0.0, kEps);
}

}  // namespace

TEST(Qsim, PrepareBB84) {
  QuantumArena a;
  const double h = std::sqrt(0.5);
  expect_amps(a.snapshot(a.prepare_bb84(0, 0)), 1, 0);
  expect_amps(a.snapshot(a.prepare_bb84(1, 0)), 0, 1);
  expect_amps(a.snapshot(a.prepare_bb84(0, 1)), h, h);
  expect_amps(a.snapshot(a.prepare_bb84(1, 1)), h, -h);
}

TEST(Qsim, MatchingBasisRecoversBit) {
  QuantumArena a;
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    for (int b = 0; b < 2; ++b) {
      for (int th = 0; th < 2; ++th) EXPECT_EQ(a.measure(a.prepare_bb84(b, th), th, rng), b);
    }
  }
  EXPECT_EQ(a.live_count(), 0u);
}

TEST(Qsim, WrongBasisIsUniform) {
  QuantumArena a;
  Rng rng(7);
  int ones = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) ones += a.measure(a.prepare_bb84(0, 1), 0, rng);
  EXPECT_NEAR(static_cast<double>(ones) / n, 0.5, 0.01);
}

TEST(Qsim, ConsumedHandleThrows) {
  QuantumArena a;
  Rng rng(1);
  auto q = a.prepare_bb84(0, 0);
  a.measure(q, 0, rng);
  EXPECT_THROW(a.measure(q, 0, rng), QsimError);
  EXPECT_THROW(a.apply_pauli(QubitHandle{999}, 1, 0), QsimError);
}

TEST(Qsim, CapacityIsEnforced) {
  QuantumArena a(3);
  a.prepare_bb84(0, 0);
  a.make_epr();
  EXPECT_THROW(a.prepare_bb84(0, 0), QsimError);
}

TEST(Qsim, EprCorrelations) {
  QuantumArena a;
  Rng rng(3);
  int ones = 0;
  for (int i = 0; i < 4000; ++i) {
    const int basis = i % 2;
    auto [p, q] = a.make_epr();
    const int x = a.measure(p, basis, rng);
    EXPECT_EQ(a.measure(q, basis, rng), x);
    ones += x;
  }
  EXPECT_NEAR(ones / 4000.0, 0.5, 0.03);
}

TEST(Qsim, BellMeasureEigenstates) {
  QuantumArena a;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto [p, q] = a.make_epr();
    const auto o = a.bell_measure(p, q, rng);
    EXPECT_EQ(o.x, 0);
    EXPECT_EQ(o.z, 0);
  }
  int z_ones = 0;
  for (int i = 0; i < 2000; ++i) {
    auto p = a.prepare_bb84(0, 0);
    auto q = a.prepare_bb84(1, 0);
    const auto o = a.bell_measure(p, q, rng);
    EXPECT_EQ(o.x, 1);
    z_ones += o.z;
  }
  EXPECT_NEAR(z_ones / 2000.0, 0.5, 0.05);
}

TEST(Qsim, Paulis) {
  QuantumArena a;
  const double h = std::sqrt(0.5);
  auto q = a.prepare_bb84(0, 0);
  a.apply_pauli(q, 0, 0);
  expect_amps(a.snapshot(q), 1, 0);
  a.apply_pauli(q, 1, 0);
  expect_amps(a.snapshot(q), 0, 1);
  auto p = a.prepare_bb84(0, 1);
  a.apply_pauli(p, 0, 1);
  expect_amps(a.snapshot(p), h, -h);
}

// Independent dense 3-qubit simulation of the teleportation circuit. For each
// (b, theta) and each of the four Bell outcomes, the projected and corrected
// target state must equal H^theta |b> up to a global phase.
TEST(Qsim, TeleportationOracleAllBranches) {
  using C = std::complex<double>;
  const double h = std::sqrt(0.5);
  for (int b = 0; b < 2; ++b) {
    for (int th = 0; th < 2; ++th) {
      std::array<C, 2> in = th ? std::array<C, 2>{h, b ? -h : h} : std::array<C, 2>{b ? 0.0 : 1.0, b ? 1.0 : 0.0};
      // Qubit order: bit0 = input, bit1 = EPR half A, bit2 = EPR half B.
      std::array<C, 8> s{};
      for (int i = 0; i < 2; ++i) {
        s[i | 0] += in[i] * h;
        s[i | 2 | 4] += in[i] * h;
      }
      std::array<C, 8> t{};
      for (int i = 0; i < 8; ++i) t[(i & 1) ? (i ^ 2) : i] = s[i];  // CNOT input -> A
      std::array<C, 8> u{};
      for (int i = 0; i < 8; ++i) {
        const int i0 = i & ~1;
        u[i] = (i & 1) ? (t[i0] - t[i0 | 1]) * h : (t[i0] + t[i0 | 1]) * h;
      }
      for (int z = 0; z < 2; ++z) {
        for (int x = 0; x < 2; ++x) {
          std::array<C, 2> tgt{u[z | (x << 1)], u[z | (x << 1) | 4]};
          const double p = std::norm(tgt[0]) + std::norm(tgt[1]);
          EXPECT_NEAR(p, 0.25, 1e-12);
          if (x) std::swap(tgt[0], tgt[1]);
          if (z) tgt[1] = -tgt[1];
          const C overlap = std::conj(in[0]) * tgt[0] + std::conj(in[1]) * tgt[1];
          EXPECT_NEAR(std::abs(overlap) / std::sqrt(p), 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(Qsim, TeleportationThroughArena) {
  QuantumArena a;
  Rng rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    const int b = trial & 1, th = (trial >> 1) & 1;
    auto q = a.prepare_bb84(b, th);
    auto [ea, eb] = a.make_epr();
    const auto o = a.bell_measure(q, ea, rng);
    a.apply_pauli(eb, o.x, o.z);
    EXPECT_EQ(a.measure(eb, th, rng), b);
  }
  EXPECT_EQ(a.live_count(), 0u);
}
