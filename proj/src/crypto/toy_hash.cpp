#include "zkpos/crypto/toy_hash.hpp"

#include "zkpos/crypto/toy_cipher.hpp"

#include <algorithm>
#include <vector>

namespace zkpos::crypto {

namespace {
constexpr std::uint64_t kIv0 = 0x6A09E667F3BCC908ull;
constexpr std::uint64_t kIv1 = 0xBB67AE8584CAA73Bull;
}  // namespace

ToyHasher::ToyHasher() : h_{kIv0, kIv1} {}

ToyHasher ToyHasher::resume(std::uint64_t h0, std::uint64_t h1, std::uint64_t length) {
  ToyHasher h;
  h.h_[0] = h0;
  h.h_[1] = h1;
  h.length_ = length;
  return h;
}

void ToyHasher::compress(const std::uint8_t* chunk) {
  const ToyKey k = ToyKey::from_bytes(std::span(chunk, 16));
  // Second lane tweaks the key so the lanes are not the same function.
  ToyKey k2 = k;
  k2.words[0] ^= 0x5A5A5A5Au;
  h_[0] ^= toy_encrypt(k, h_[0]);
  h_[1] ^= toy_encrypt(k2, h_[1]);
}

void ToyHasher::update(std::span<const std::uint8_t> data) {
  length_ += data.size();
  std::size_t i = 0;
  if (fill_ > 0) {
    while (fill_ < 16 && i < data.size()) buf_[fill_++] = data[i++];
    if (fill_ < 16) return;
    compress(buf_.data());
    fill_ = 0;
  }
  for (; i + 16 <= data.size(); i += 16) compress(data.data() + i);
  while (i < data.size()) buf_[fill_++] = data[i++];
}

void ToyHasher::update_u64(std::uint64_t v) {
  std::uint8_t b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  update(b);
}

Digest ToyHasher::finish() {
  const std::uint64_t bits = length_ * 8;
  buf_[fill_++] = 0x80;
  if (fill_ > 8) {
    while (fill_ < 16) buf_[fill_++] = 0;
    compress(buf_.data());
    fill_ = 0;
  }
  while (fill_ < 8) buf_[fill_++] = 0;
  for (int i = 0; i < 8; ++i) buf_[8 + i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
  compress(buf_.data());
  Digest out{};
  for (int lane = 0; lane < 2; ++lane) {
    for (int i = 0; i < 8; ++i) out[8 * lane + i] = static_cast<std::uint8_t>(h_[lane] >> (56 - 8 * i));
  }
  return out;
}

Digest toy_hash(std::span<const std::uint8_t> data) {
  ToyHasher h;
  h.update(data);
  return h.finish();
}

Digest toy_hash_striped(std::span<const std::uint8_t> data) {
  constexpr std::size_t kStripes = 32;
  const std::size_t n = data.size();
  if (n < kStripedMinBytes) return toy_hash(data);
  const std::size_t stripe = ((n + kStripes - 1) / kStripes + 15) / 16 * 16;
  std::vector<std::span<const std::uint8_t>> seg(kStripes);
  std::size_t common = SIZE_MAX;
  for (std::size_t j = 0; j < kStripes; ++j) {
    const std::size_t begin = std::min(n, j * stripe), end = std::min(n, begin + stripe);
    seg[j] = data.subspan(begin, end - begin);
    common = std::min(common, seg[j].size() / 16);
  }
  // Both lanes of every stripe go through one batched call per block.
  std::vector<ToyKey> keys(2 * kStripes);
  std::vector<std::uint64_t> h(2 * kStripes), out(2 * kStripes);
  for (std::size_t j = 0; j < kStripes; ++j) {
    h[2 * j] = kIv0;
    h[2 * j + 1] = kIv1;
  }
  for (std::size_t t = 0; t < common; ++t) {
    for (std::size_t j = 0; j < kStripes; ++j) {
      keys[2 * j] = ToyKey::from_bytes(seg[j].subspan(16 * t, 16));
      keys[2 * j + 1] = keys[2 * j];
      keys[2 * j + 1].words[0] ^= 0x5A5A5A5Au;
    }
    toy_encrypt_many(keys, h, out);
    for (std::size_t l = 0; l < h.size(); ++l) h[l] ^= out[l];
  }
  ToyHasher top;
  top.update_u64(n);
  for (std::size_t j = 0; j < kStripes; ++j) {
    auto lane = ToyHasher::resume(h[2 * j], h[2 * j + 1], 16 * common);
    lane.update(seg[j].subspan(16 * common));
    top.update(lane.finish());
  }
  return top.finish();
}

}  // namespace zkpos::crypto
