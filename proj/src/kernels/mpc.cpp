#include "zkpos/kernels/mpc.hpp"

#include <stdexcept>

#include "zkpos/crypto/toy_cipher.hpp"

namespace zkpos::kernels {

using crypto::Circuit;
using crypto::Gate;
using crypto::GateOp;

namespace {

constexpr std::size_t kLanes = 64;

std::vector<std::uint32_t> and_positions(const Circuit& c) {
  std::vector<std::uint32_t> pos;
  for (std::uint32_t g = 0; g < c.gates.size(); ++g) {
    if (c.gates[g].op == GateOp::kAnd) pos.push_back(g);
  }
  return pos;
}

/// out[j] bit r = bit j of rows[r]; rows beyond rows.size() count as zero.
void to_lanes(std::span<const PackedBits* const> rows, std::size_t n_bits, std::vector<std::uint64_t>& out) {
  out.assign(n_bits, 0);
  std::uint64_t m[64];
  for (std::size_t w = 0; w < words_for(n_bits); ++w) {
    for (std::size_t r = 0; r < kLanes; ++r) m[r] = r < rows.size() ? (*rows[r])[w] : 0;
    transpose64(m);
    for (std::size_t t = 0; t < kLanes && w * kLanes + t < n_bits; ++t) out[w * kLanes + t] = m[t];
  }
}

/// Inverse of to_lanes for the first rows.size() lanes.
void from_lanes(const std::vector<std::uint64_t>& lanes, std::size_t n_bits, std::span<PackedBits* const> rows) {
  for (auto* r : rows) r->assign(words_for(n_bits), 0);
  std::uint64_t m[64];
  for (std::size_t w = 0; w < words_for(n_bits); ++w) {
    for (std::size_t t = 0; t < kLanes; ++t) m[t] = w * kLanes + t < n_bits ? lanes[w * kLanes + t] : 0;
    transpose64(m);
    for (std::size_t r = 0; r < rows.size(); ++r) (*rows[r])[w] = m[r];
  }
}

void check_lengths(const Circuit& c, const PartyView& v, std::size_t n_and) {
  if (v.input_share.size() != words_for(c.num_inputs) || v.and_outputs.size() != words_for(n_and)) {
    throw std::invalid_argument("view length does not match circuit");
  }
}

}  // namespace

PackedBits party_tape(const Seed& seed, std::size_t n_and) {
  const auto key = crypto::ToyKey::from_bytes(seed);
  PackedBits tape(words_for(n_and));
  crypto::toy_prg_blocks(key, 0, tape);
  for (auto& word : tape) word = reverse_bits64(word);
  if (n_and % 64) tape.back() &= (std::uint64_t{1} << (n_and % 64)) - 1;
  return tape;
}

std::vector<RepTranscript> mpc_run_reference(const Circuit& c, std::span<const RepInput> reps) {
  const auto ands = and_positions(c);
  const std::size_t n_and = ands.size();
  std::vector<RepTranscript> out(reps.size());
  std::array<std::vector<std::uint8_t>, 3> w;
  for (std::size_t r = 0; r < reps.size(); ++r) {
    const RepInput& in = reps[r];
    std::array<PackedBits, 3> tape;
    RepTranscript& t = out[r];
    for (int i = 0; i < 3; ++i) {
      tape[i] = party_tape(in.seeds[i], n_and);
      w[i].assign(c.gates.size(), 0);
      t.views[i].seed = in.seeds[i];
      t.views[i].input_share = in.input_shares[i];
      t.views[i].and_outputs.assign(words_for(n_and), 0);
    }
    std::size_t k = 0;
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const Gate& gate = c.gates[g];
      switch (gate.op) {
        case GateOp::kInput:
          for (int i = 0; i < 3; ++i) w[i][g] = static_cast<std::uint8_t>(get_bit(in.input_shares[i], gate.a));
          break;
        case GateOp::kConst:
          w[0][g] = static_cast<std::uint8_t>(gate.a);
          break;
        case GateOp::kXor:
          for (int i = 0; i < 3; ++i) w[i][g] = w[i][gate.a] ^ w[i][gate.b];
          break;
        case GateOp::kNot:
          for (int i = 0; i < 3; ++i) w[i][g] = w[i][gate.a] ^ (i == 0 ? 1 : 0);
          break;
        case GateOp::kAnd: {
          for (int i = 0; i < 3; ++i) {
            const int j = (i + 1) % 3;
            const int ai = w[i][gate.a], bi = w[i][gate.b], aj = w[j][gate.a], bj = w[j][gate.b];
            int z = (ai & bi) ^ (aj & bi) ^ (ai & bj) ^ get_bit(tape[i], k) ^ get_bit(tape[j], k);
            if (g == c.output && in.fault_party == i) z ^= 1;
            w[i][g] = static_cast<std::uint8_t>(z);
            set_bit(t.views[i].and_outputs, k, z);
          }
          ++k;
          break;
        }
      }
    }
    for (int i = 0; i < 3; ++i) t.output_shares[i] = w[i][c.output];
  }
  return out;
}

std::vector<RepTranscript> mpc_run_packed(const Circuit& c, std::span<const RepInput> reps) {
  const auto ands = and_positions(c);
  const std::size_t n_and = ands.size();
  const std::size_t n_gates = c.gates.size();
  std::vector<RepTranscript> out(reps.size());
  const std::size_t n_blocks = (reps.size() + kLanes - 1) / kLanes;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    const std::size_t base = blk * kLanes;
    const std::size_t L = std::min(kLanes, reps.size() - base);

    std::array<std::vector<std::uint64_t>, 3> tape, input, w, zrec;
    std::array<std::uint64_t, 3> fault{};
    for (int i = 0; i < 3; ++i) {
      std::vector<PackedBits> tapes(L);
      std::vector<const PackedBits*> rows(L), in_rows(L);
      for (std::size_t r = 0; r < L; ++r) {
        tapes[r] = party_tape(reps[base + r].seeds[i], n_and);
        rows[r] = &tapes[r];
        in_rows[r] = &reps[base + r].input_shares[i];
        if (reps[base + r].fault_party == i) fault[i] |= std::uint64_t{1} << r;
      }
      to_lanes(rows, n_and, tape[i]);
      to_lanes(in_rows, c.num_inputs, input[i]);
      w[i].assign(n_gates, 0);
      zrec[i].assign(n_and, 0);
    }
    const std::uint64_t all = L == kLanes ? ~std::uint64_t{0} : (std::uint64_t{1} << L) - 1;

    std::size_t k = 0;
    for (std::size_t g = 0; g < n_gates; ++g) {
      const Gate& gate = c.gates[g];
      switch (gate.op) {
        case GateOp::kInput:
          for (int i = 0; i < 3; ++i) w[i][g] = input[i][gate.a];
          break;
        case GateOp::kConst:
          w[0][g] = gate.a ? all : 0;
          break;
        case GateOp::kXor:
          for (int i = 0; i < 3; ++i) w[i][g] = w[i][gate.a] ^ w[i][gate.b];
          break;
        case GateOp::kNot:
          w[0][g] = w[0][gate.a] ^ all;
          w[1][g] = w[1][gate.a];
          w[2][g] = w[2][gate.a];
          break;
        case GateOp::kAnd: {
          const std::uint64_t a0 = w[0][gate.a], a1 = w[1][gate.a], a2 = w[2][gate.a];
          const std::uint64_t b0 = w[0][gate.b], b1 = w[1][gate.b], b2 = w[2][gate.b];
          const std::uint64_t r0 = tape[0][k], r1 = tape[1][k], r2 = tape[2][k];
          std::uint64_t z0 = (a0 & b0) ^ (a1 & b0) ^ (a0 & b1) ^ r0 ^ r1;
          std::uint64_t z1 = (a1 & b1) ^ (a2 & b1) ^ (a1 & b2) ^ r1 ^ r2;
          std::uint64_t z2 = (a2 & b2) ^ (a0 & b2) ^ (a2 & b0) ^ r2 ^ r0;
          if (g == c.output) {
            z0 ^= fault[0];
            z1 ^= fault[1];
            z2 ^= fault[2];
          }
          w[0][g] = zrec[0][k] = z0;
          w[1][g] = zrec[1][k] = z1;
          w[2][g] = zrec[2][k] = z2;
          ++k;
          break;
        }
      }
    }

    for (int i = 0; i < 3; ++i) {
      std::vector<PackedBits*> rows(L);
      for (std::size_t r = 0; r < L; ++r) {
        RepTranscript& t = out[base + r];
        t.views[i].seed = reps[base + r].seeds[i];
        t.views[i].input_share = reps[base + r].input_shares[i];
        t.output_shares[i] = static_cast<std::uint8_t>((w[i][c.output] >> r) & 1u);
        rows[r] = &t.views[i].and_outputs;
      }
      from_lanes(zrec[i], n_and, rows);
    }
  }
  return out;
}

std::vector<RepTranscript> mpc_run(const Circuit& c, std::span<const RepInput> reps, Kernel k) {
  return k == Kernel::kPacked ? mpc_run_packed(c, reps) : mpc_run_reference(c, reps);
}

std::vector<PairCheck> mpc_check_reference(const Circuit& c, std::span<const OpenedPair> pairs) {
  const std::size_t n_and = and_positions(c).size();
  std::vector<PairCheck> out(pairs.size());
  std::vector<std::uint8_t> wf, ws;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const OpenedPair& pr = pairs[p];
    check_lengths(c, *pr.first, n_and);
    check_lengths(c, *pr.second, n_and);
    const PackedBits tf = party_tape(pr.first->seed, n_and);
    const PackedBits ts = party_tape(pr.second->seed, n_and);
    const int first_is_0 = pr.e == 0, second_is_0 = pr.e == 2;
    wf.assign(c.gates.size(), 0);
    ws.assign(c.gates.size(), 0);
    bool ok = true;
    std::size_t k = 0;
    for (std::size_t g = 0; g < c.gates.size(); ++g) {
      const Gate& gate = c.gates[g];
      switch (gate.op) {
        case GateOp::kInput:
          wf[g] = static_cast<std::uint8_t>(get_bit(pr.first->input_share, gate.a));
          ws[g] = static_cast<std::uint8_t>(get_bit(pr.second->input_share, gate.a));
          break;
        case GateOp::kConst:
          wf[g] = static_cast<std::uint8_t>(gate.a & first_is_0);
          ws[g] = static_cast<std::uint8_t>(gate.a & second_is_0);
          break;
        case GateOp::kXor:
          wf[g] = wf[gate.a] ^ wf[gate.b];
          ws[g] = ws[gate.a] ^ ws[gate.b];
          break;
        case GateOp::kNot:
          wf[g] = static_cast<std::uint8_t>(wf[gate.a] ^ first_is_0);
          ws[g] = static_cast<std::uint8_t>(ws[gate.a] ^ second_is_0);
          break;
        case GateOp::kAnd: {
          const int af = wf[gate.a], bf = wf[gate.b], as = ws[gate.a], bs = ws[gate.b];
          const int calc = (af & bf) ^ (as & bf) ^ (af & bs) ^ get_bit(tf, k) ^ get_bit(ts, k);
          const int zf = get_bit(pr.first->and_outputs, k);
          if (calc != zf) ok = false;
          wf[g] = static_cast<std::uint8_t>(zf);
          ws[g] = static_cast<std::uint8_t>(get_bit(pr.second->and_outputs, k));
          ++k;
          break;
        }
      }
    }
    out[p] = {ok, wf[c.output], ws[c.output]};
  }
  return out;
}

std::vector<PairCheck> mpc_check_packed(const Circuit& c, std::span<const OpenedPair> pairs) {
  const std::size_t n_and = and_positions(c).size();
  const std::size_t n_gates = c.gates.size();
  for (const auto& pr : pairs) {
    check_lengths(c, *pr.first, n_and);
    check_lengths(c, *pr.second, n_and);
  }
  std::vector<PairCheck> out(pairs.size());
  const std::size_t n_blocks = (pairs.size() + kLanes - 1) / kLanes;

#pragma omp parallel for schedule(dynamic)
  for (std::size_t blk = 0; blk < n_blocks; ++blk) {
    const std::size_t base = blk * kLanes;
    const std::size_t L = std::min(kLanes, pairs.size() - base);
    std::vector<PackedBits> tapes_f(L), tapes_s(L);
    std::vector<const PackedBits*> rf(L), rs(L), inf(L), ins(L), zf_rows(L), zs_rows(L);
    std::uint64_t mf = 0, ms = 0;
    for (std::size_t r = 0; r < L; ++r) {
      const OpenedPair& pr = pairs[base + r];
      tapes_f[r] = party_tape(pr.first->seed, n_and);
      tapes_s[r] = party_tape(pr.second->seed, n_and);
      rf[r] = &tapes_f[r];
      rs[r] = &tapes_s[r];
      inf[r] = &pr.first->input_share;
      ins[r] = &pr.second->input_share;
      zf_rows[r] = &pr.first->and_outputs;
      zs_rows[r] = &pr.second->and_outputs;
      if (pr.e == 0) mf |= std::uint64_t{1} << r;
      if (pr.e == 2) ms |= std::uint64_t{1} << r;
    }
    std::vector<std::uint64_t> tf, ts, in_f, in_s, zf, zs;
    to_lanes(rf, n_and, tf);
    to_lanes(rs, n_and, ts);
    to_lanes(inf, c.num_inputs, in_f);
    to_lanes(ins, c.num_inputs, in_s);
    to_lanes(zf_rows, n_and, zf);
    to_lanes(zs_rows, n_and, zs);

    std::vector<std::uint64_t> wf(n_gates), ws(n_gates);
    std::uint64_t bad = 0;
    std::size_t k = 0;
    for (std::size_t g = 0; g < n_gates; ++g) {
      const Gate& gate = c.gates[g];
      switch (gate.op) {
        case GateOp::kInput:
          wf[g] = in_f[gate.a];
          ws[g] = in_s[gate.a];
          break;
        case GateOp::kConst:
          wf[g] = gate.a ? mf : 0;
          ws[g] = gate.a ? ms : 0;
          break;
        case GateOp::kXor:
          wf[g] = wf[gate.a] ^ wf[gate.b];
          ws[g] = ws[gate.a] ^ ws[gate.b];
          break;
        case GateOp::kNot:
          wf[g] = wf[gate.a] ^ mf;
          ws[g] = ws[gate.a] ^ ms;
          break;
        case GateOp::kAnd: {
          const std::uint64_t af = wf[gate.a], bf = wf[gate.b], as = ws[gate.a], bs = ws[gate.b];
          const std::uint64_t calc = (af & bf) ^ (as & bf) ^ (af & bs) ^ tf[k] ^ ts[k];
          bad |= calc ^ zf[k];
          wf[g] = zf[k];
          ws[g] = zs[k];
          ++k;
          break;
        }
      }
    }
    for (std::size_t r = 0; r < L; ++r) {
      out[base + r] = {((bad >> r) & 1u) == 0, static_cast<std::uint8_t>((wf[c.output] >> r) & 1u),
                       static_cast<std::uint8_t>((ws[c.output] >> r) & 1u)};
    }
  }
  return out;
}

std::vector<PairCheck> mpc_check(const Circuit& c, std::span<const OpenedPair> pairs, Kernel k) {
  return k == Kernel::kPacked ? mpc_check_packed(c, pairs) : mpc_check_reference(c, pairs);
}

std::pair<std::uint8_t, std::uint8_t> mpc_complete_first(const Circuit& c, int e, PartyView& first,
                                                         const PartyView& second) {
  const std::size_t n_and = and_positions(c).size();
  first.and_outputs.assign(words_for(n_and), 0);
  check_lengths(c, first, n_and);
  check_lengths(c, second, n_and);
  const PackedBits tf = party_tape(first.seed, n_and);
  const PackedBits ts = party_tape(second.seed, n_and);
  const int first_is_0 = e == 0, second_is_0 = e == 2;
  std::vector<std::uint8_t> wf(c.gates.size()), ws(c.gates.size());
  std::size_t k = 0;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    switch (gate.op) {
      case GateOp::kInput:
        wf[g] = static_cast<std::uint8_t>(get_bit(first.input_share, gate.a));
        ws[g] = static_cast<std::uint8_t>(get_bit(second.input_share, gate.a));
        break;
      case GateOp::kConst:
        wf[g] = static_cast<std::uint8_t>(gate.a & first_is_0);
        ws[g] = static_cast<std::uint8_t>(gate.a & second_is_0);
        break;
      case GateOp::kXor:
        wf[g] = wf[gate.a] ^ wf[gate.b];
        ws[g] = ws[gate.a] ^ ws[gate.b];
        break;
      case GateOp::kNot:
        wf[g] = static_cast<std::uint8_t>(wf[gate.a] ^ first_is_0);
        ws[g] = static_cast<std::uint8_t>(ws[gate.a] ^ second_is_0);
        break;
      case GateOp::kAnd: {
        const int af = wf[gate.a], bf = wf[gate.b], as = ws[gate.a], bs = ws[gate.b];
        const int calc = (af & bf) ^ (as & bf) ^ (af & bs) ^ get_bit(tf, k) ^ get_bit(ts, k);
        set_bit(first.and_outputs, k, calc);
        wf[g] = static_cast<std::uint8_t>(calc);
        ws[g] = static_cast<std::uint8_t>(get_bit(second.and_outputs, k));
        ++k;
        break;
      }
    }
  }
  return {wf[c.output], ws[c.output]};
}

}  // namespace zkpos::kernels
