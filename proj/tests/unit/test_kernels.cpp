#include <gtest/gtest.h>

#include "zkpos/kernels/batch_eval.hpp"
#include "zkpos/kernels/bitpack.hpp"
#include "zkpos/kernels/mpc.hpp"
#include "zkpos/kernels/trials.hpp"

using namespace zkpos;
using namespace zkpos::kernels;
using crypto::Circuit;
using crypto::CircuitBuilder;
using crypto::Wire;

namespace {

Circuit random_circuit(Rng& rng, std::uint32_t n_in, int n_gates) {
  CircuitBuilder cb(n_in);
  std::vector<Wire> pool;
  for (std::uint32_t i = 0; i < n_in; ++i) pool.push_back(cb.input(i));
  pool.push_back(cb.constant(true));
  for (int g = 0; g < n_gates; ++g) {
    const Wire a = pool[rng.below(pool.size())], b = pool[rng.below(pool.size())];
    switch (rng.below(4)) {
      case 0: pool.push_back(cb.xor_(a, b)); break;
      case 1: pool.push_back(cb.not_(a)); break;
      default: pool.push_back(cb.and_(a, b)); break;
    }
  }
  std::vector<Wire> tail(pool.end() - 8, pool.end());
  Wire out = tail[0];
  for (std::size_t i = 1; i < tail.size(); ++i) out = cb.xor_(out, tail[i]);
  return cb.finish(cb.or_(out, pool[rng.below(pool.size())]));
}

std::vector<RepInput> random_inputs(Rng& rng, const Circuit& c, std::size_t reps, bool faults) {
  std::vector<RepInput> in(reps);
  for (auto& r : in) {
    for (auto& s : r.seeds) {
      for (auto& b : s) b = static_cast<std::uint8_t>(rng.u64());
    }
    for (auto& x : r.input_shares) x = pack_words(rng.bits(c.num_inputs));
    r.fault_party = faults ? static_cast<int>(rng.below(4)) - 1 : -1;
  }
  return in;
}

}  // namespace

TEST(Bitpack, TransposeMatchesNaive) {
  Rng rng(1);
  std::uint64_t a[64], b[64];
  for (auto& x : a) x = rng.u64();
  std::copy(a, a + 64, b);
  transpose64(b);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 64; ++c) ASSERT_EQ((a[r] >> c) & 1, (b[c] >> r) & 1);
  }
  transpose64(b);
  EXPECT_TRUE(std::equal(a, a + 64, b));
}

TEST(Bitpack, PackingLayouts) {
  Rng rng(2);
  const Bits bits = rng.bits(150);
  const auto p = pack_words(bits);
  EXPECT_EQ(unpack_words(p, 150), bits);
  EXPECT_EQ(packed_to_bytes(p, 150), pack_bits(bits));
  EXPECT_EQ(reverse_bits64(1), std::uint64_t{1} << 63);
}

TEST(Mpc, SharesReconstructCircuitOutput) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    const Circuit c = random_circuit(rng, 12, 300);
    auto in = random_inputs(rng, c, 5, false);
    const auto tr = mpc_run_reference(c, in);
    for (std::size_t r = 0; r < in.size(); ++r) {
      Bits w(c.num_inputs);
      for (std::uint32_t j = 0; j < c.num_inputs; ++j) {
        w[j] = static_cast<std::uint8_t>(get_bit(in[r].input_shares[0], j) ^ get_bit(in[r].input_shares[1], j) ^
                                         get_bit(in[r].input_shares[2], j));
      }
      const int y = tr[r].output_shares[0] ^ tr[r].output_shares[1] ^ tr[r].output_shares[2];
      EXPECT_EQ(y, crypto::circuit_eval(c, w) ? 1 : 0);
    }
  }
}

TEST(Mpc, PackedMatchesReference) {
  Rng rng(4);
  for (int t = 0; t < 5; ++t) {
    const Circuit c = random_circuit(rng, 70, 900);
    const auto in = random_inputs(rng, c, 130, true);  // spans three blocks
    const auto a = mpc_run_reference(c, in);
    const auto b = mpc_run_packed(c, in);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t r = 0; r < a.size(); ++r) {
      EXPECT_EQ(a[r].views, b[r].views) << r;
      EXPECT_EQ(a[r].output_shares, b[r].output_shares) << r;
    }
  }
}

TEST(Mpc, PairChecksAgreeAndDetectTampering) {
  Rng rng(5);
  const Circuit c = random_circuit(rng, 20, 600);
  const auto in = random_inputs(rng, c, 100, false);
  auto tr = mpc_run_reference(c, in);
  std::vector<OpenedPair> pairs(tr.size());
  std::vector<int> tampered(tr.size(), 0);
  for (std::size_t r = 0; r < tr.size(); ++r) {
    const int e = static_cast<int>(rng.below(3));
    if (r % 4 == 0 && c.and_count() > 0) {
      // Flip one recorded AND output of the first opened party.
      set_bit(tr[r].views[e].and_outputs, 0, get_bit(tr[r].views[e].and_outputs, 0) ^ 1);
      tampered[r] = 1;
    }
    pairs[r] = {e, &tr[r].views[e], &tr[r].views[(e + 1) % 3]};
  }
  const auto a = mpc_check_reference(c, pairs);
  const auto b = mpc_check_packed(c, pairs);
  for (std::size_t r = 0; r < tr.size(); ++r) {
    EXPECT_EQ(a[r].consistent, b[r].consistent);
    EXPECT_EQ(a[r].y_first, b[r].y_first);
    EXPECT_EQ(a[r].y_second, b[r].y_second);
    EXPECT_EQ(a[r].consistent, !tampered[r]) << r;
    if (!tampered[r]) {
      const int e = pairs[r].e;
      EXPECT_EQ(a[r].y_first, tr[r].output_shares[e]);
      EXPECT_EQ(a[r].y_second, tr[r].output_shares[(e + 1) % 3]);
    }
  }
}

TEST(Mpc, CompleteFirstProducesConsistentPair) {
  Rng rng(6);
  const Circuit c = random_circuit(rng, 10, 200);
  const auto in = random_inputs(rng, c, 1, false);
  const auto tr = mpc_run_reference(c, in);
  for (int e = 0; e < 3; ++e) {
    PartyView first = tr[0].views[e];
    first.and_outputs.clear();
    const auto [yf, ys] = mpc_complete_first(c, e, first, tr[0].views[(e + 1) % 3]);
    EXPECT_EQ(first, tr[0].views[e]);
    EXPECT_EQ(yf, tr[0].output_shares[e]);
    EXPECT_EQ(ys, tr[0].output_shares[(e + 1) % 3]);
  }
}

TEST(BatchEval, MatchesReference) {
  Rng rng(7);
  const Circuit c = random_circuit(rng, 16, 400);
  std::vector<Bits> ws(200);
  for (auto& w : ws) w = rng.bits(16);
  EXPECT_EQ(circuit_eval_batch(c, ws), circuit_eval_batch_reference(c, ws));
}

TEST(Trials, ParallelMatchesSerial) {
  auto trial = [](Rng& rng, std::uint64_t) { return rng.below(4) == 0; };
  const auto a = run_trials(5000, 11, trial);
  const auto b = run_trials_serial(5000, 11, trial);
  EXPECT_EQ(a.successes, b.successes);
  EXPECT_NEAR(a.rate(), 0.25, 0.02);
  const auto [lo, hi] = a.ci95();
  EXPECT_LT(lo, a.rate());
  EXPECT_GT(hi, a.rate());
}
