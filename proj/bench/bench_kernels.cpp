// Parallel and packed kernels against the serial references they replace.
#include <benchmark/benchmark.h>

#include "zkpos/crypto/toy_cipher.hpp"
#include "zkpos/crypto/toy_hash.hpp"
#include "zkpos/kernels/batch_eval.hpp"
#include "zkpos/kernels/mpc.hpp"
#include "zkpos/kernels/trials.hpp"
#include "zkpos/pv/fbb84.hpp"

using namespace zkpos;
using namespace zkpos::kernels;

namespace {

crypto::Circuit random_circuit(Rng& rng, std::uint32_t n_in, int n_gates) {
  crypto::CircuitBuilder cb(n_in);
  std::vector<crypto::Wire> pool;
  for (std::uint32_t i = 0; i < n_in; ++i) pool.push_back(cb.input(i));
  for (int g = 0; g < n_gates; ++g) {
    const auto a = pool[rng.below(pool.size())], b = pool[rng.below(pool.size())];
    pool.push_back(rng.bit() ? cb.and_(a, b) : cb.xor_(a, b));
  }
  // Fold everything into the output so no gate is pruned as dead.
  crypto::Wire acc = pool[n_in];
  for (std::size_t i = n_in + 1; i < pool.size(); ++i) acc = cb.xor_(acc, pool[i]);
  return cb.finish(cb.and_(acc, pool[0]));
}

std::vector<RepInput> random_inputs(Rng& rng, const crypto::Circuit& c, std::size_t reps) {
  std::vector<RepInput> in(reps);
  for (auto& r : in) {
    for (auto& s : r.seeds) {
      for (auto& b : s) b = static_cast<std::uint8_t>(rng.u64());
    }
    for (auto& x : r.input_shares) x = pack_words(rng.bits(c.num_inputs));
  }
  return in;
}

void BM_Mpc(benchmark::State& state, Kernel k) {
  Rng rng(1);
  const auto c = random_circuit(rng, 256, 20000);
  const auto in = random_inputs(rng, c, static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(mpc_run(c, in, k));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Mpc, reference, Kernel::kReference)->Arg(8)->Arg(40)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Mpc, packed, Kernel::kPacked)->Arg(8)->Arg(40)->Unit(benchmark::kMillisecond);

void BM_BatchEval(benchmark::State& state, bool packed) {
  Rng rng(2);
  const auto c = random_circuit(rng, 64, 5000);
  std::vector<Bits> w(1024);
  for (auto& x : w) x = rng.bits(64);
  for (auto _ : state) {
    benchmark::DoNotOptimize(packed ? circuit_eval_batch(c, w) : circuit_eval_batch_reference(c, w));
  }
}
BENCHMARK_CAPTURE(BM_BatchEval, reference, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BatchEval, packed, true)->Unit(benchmark::kMillisecond);

bool honest_pv_trial(Rng& rng, std::uint64_t) {
  static const pv::PvInstance inst{{{sim::Rational(0)}, {sim::Rational(6)}}, {{sim::Rational(3)}, sim::Rational(10)}, 8, 4, 0};
  std::vector<pv::PartySpec> provers;
  provers.push_back({inst.target.L, std::make_unique<pv::HonestProver>(inst.k(), pv::fbb84_scheme())});
  return pv::run_singleton_pv(inst, rng.u64(), std::move(provers)).accept;
}

void BM_Trials(benchmark::State& state, bool parallel) {
  for (auto _ : state) {
    const auto s = parallel ? run_trials(2000, 7, honest_pv_trial) : run_trials_serial(2000, 7, honest_pv_trial);
    benchmark::DoNotOptimize(s.successes);
  }
}
BENCHMARK_CAPTURE(BM_Trials, serial, false)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_Trials, openmp, true)->Unit(benchmark::kMillisecond);

void BM_Encrypt(benchmark::State& state, bool many) {
  Rng rng(3);
  std::vector<crypto::ToyKey> keys;
  std::vector<std::uint64_t> blocks(4096), out(4096);
  for (auto& b : blocks) {
    b = rng.u64();
    keys.push_back(crypto::ToyKey::from_bits(rng.bits(128)));
  }
  for (auto _ : state) {
    if (many) {
      crypto::toy_encrypt_many(keys, blocks, out);
    } else {
      for (std::size_t i = 0; i < blocks.size(); ++i) out[i] = crypto::toy_encrypt(keys[i], blocks[i]);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * 4096);
}
BENCHMARK_CAPTURE(BM_Encrypt, scalar, false);
BENCHMARK_CAPTURE(BM_Encrypt, many, true);

void BM_Hash(benchmark::State& state, bool striped) {
  Rng rng(4);
  Bytes data(static_cast<std::size_t>(state.range(0)));
  for (auto& b : data) b = static_cast<std::uint8_t>(rng.u64());
  for (auto _ : state) benchmark::DoNotOptimize(striped ? crypto::toy_hash_striped(data) : crypto::toy_hash(data));
  state.SetBytesProcessed(state.iterations() * state.range(0));
}
BENCHMARK_CAPTURE(BM_Hash, scalar, false)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK_CAPTURE(BM_Hash, striped, true)->Arg(1 << 16)->Arg(1 << 20);

}  // namespace

BENCHMARK_MAIN();
