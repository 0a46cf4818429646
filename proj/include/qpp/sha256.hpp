#pragma once

// SHA-256 (FIPS 180-4), HMAC-SHA-256 (RFC 2104) and HKDF (RFC 5869).

#include <cstdint>
#include <cstring>
#include <array>

#include "qpp/bytes.hpp"

namespace qpp {

class Sha256 {
 public:
  static constexpr size_t kDigestSize = 32;
  static constexpr size_t kBlockSize = 64;
  using Digest = std::array<uint8_t, kDigestSize>;

  Sha256() { reset(); }

  void reset() {
    state_ = {0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
              0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    total_ = 0;
    buffered_ = 0;
  }

  void update(const uint8_t* data, size_t len) {
    total_ += len;
    if (buffered_ > 0) {
      size_t n = std::min(len, kBlockSize - buffered_);
      std::memcpy(buffer_ + buffered_, data, n);
      buffered_ += n;
      data += n;
      len -= n;
      if (buffered_ == kBlockSize) {
        compress(buffer_);
        buffered_ = 0;
      }
    }
    while (len >= kBlockSize) {
      compress(data);
      data += kBlockSize;
      len -= kBlockSize;
    }
    if (len > 0) {
      std::memcpy(buffer_, data, len);
      buffered_ = len;
    }
  }
  void update(const Bytes& b) { update(b.data(), b.size()); }
  void update(std::string_view s) {
    update(reinterpret_cast<const uint8_t*>(s.data()), s.size());
  }
  template <size_t N>
  void update(const std::array<uint8_t, N>& a) {
    update(a.data(), N);
  }

  Digest finish() {
    uint64_t bit_len = total_ * 8;
    uint8_t pad = 0x80;
    update(&pad, 1);
    uint8_t zero = 0;
    while (buffered_ != 56) update(&zero, 1);
    uint8_t len_be[8];
    for (int i = 0; i < 8; ++i) len_be[i] = static_cast<uint8_t>(bit_len >> (56 - 8 * i));
    // update() counts these toward total_, but bit_len is already captured
    update(len_be, 8);
    Digest out;
    for (int i = 0; i < 8; ++i) {
      out[4 * i] = static_cast<uint8_t>(state_[i] >> 24);
      out[4 * i + 1] = static_cast<uint8_t>(state_[i] >> 16);
      out[4 * i + 2] = static_cast<uint8_t>(state_[i] >> 8);
      out[4 * i + 3] = static_cast<uint8_t>(state_[i]);
    }
    return out;
  }

  static Digest hash(const uint8_t* data, size_t len) {
    Sha256 h;
    h.update(data, len);
    return h.finish();
  }
  static Digest hash(const Bytes& b) { return hash(b.data(), b.size()); }

 private:
  static uint32_t rotr(uint32_t x, int n) { return x >> n | x << (32 - n); }

  void compress(const uint8_t* block) {
    static constexpr uint32_t k[64] = {
        0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1,
        0x923f82a4, 0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3,
        0x72be5d74, 0x80deb1fe, 0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786,
        0x0fc19dc6, 0x240ca1cc, 0x2de92c6f, 0x4a7484aa, 0x5cb0a9dc, 0x76f988da,
        0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7, 0xc6e00bf3, 0xd5a79147,
        0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc, 0x53380d13,
        0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
        0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070,
        0x19a4c116, 0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a,
        0x5b9cca4f, 0x682e6ff3, 0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208,
        0x90befffa, 0xa4506ceb, 0xbef9a3f7, 0xc67178f2};
    uint32_t w[64];
    for (int i = 0; i < 16; ++i)
      w[i] = static_cast<uint32_t>(block[4 * i]) << 24 |
             static_cast<uint32_t>(block[4 * i + 1]) << 16 |
             static_cast<uint32_t>(block[4 * i + 2]) << 8 |
             static_cast<uint32_t>(block[4 * i + 3]);
    for (int i = 16; i < 64; ++i) {
      uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
      uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
      w[i] = w[i - 16] + s0 + w[i - 7] + s1;
    }
    uint32_t a = state_[0], b = state_[1], c = state_[2], d = state_[3];
    uint32_t e = state_[4], f = state_[5], g = state_[6], h = state_[7];
    for (int i = 0; i < 64; ++i) {
      uint32_t s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25);
      uint32_t ch = (e & f) ^ (~e & g);
      uint32_t t1 = h + s1 + ch + k[i] + w[i];
      uint32_t s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22);
      uint32_t maj = (a & b) ^ (a & c) ^ (b & c);
      uint32_t t2 = s0 + maj;
      h = g; g = f; f = e; e = d + t1;
      d = c; c = b; b = a; a = t1 + t2;
    }
    state_[0] += a; state_[1] += b; state_[2] += c; state_[3] += d;
    state_[4] += e; state_[5] += f; state_[6] += g; state_[7] += h;
  }

  std::array<uint32_t, 8> state_;
  uint64_t total_ = 0;
  uint8_t buffer_[kBlockSize];
  size_t buffered_ = 0;
};

inline Sha256::Digest hmac_sha256(const uint8_t* key, size_t key_len,
                                  const uint8_t* msg, size_t msg_len) {
  uint8_t k[Sha256::kBlockSize] = {0};
  if (key_len > Sha256::kBlockSize) {
    auto d = Sha256::hash(key, key_len);
    std::memcpy(k, d.data(), d.size());
  } else {
    std::memcpy(k, key, key_len);
  }
  uint8_t ipad[Sha256::kBlockSize], opad[Sha256::kBlockSize];
  for (size_t i = 0; i < Sha256::kBlockSize; ++i) {
    ipad[i] = k[i] ^ 0x36;
    opad[i] = k[i] ^ 0x5c;
  }
  Sha256 inner;
  inner.update(ipad, sizeof(ipad));
  inner.update(msg, msg_len);
  auto inner_digest = inner.finish();
  Sha256 outer;
  outer.update(opad, sizeof(opad));
  outer.update(inner_digest.data(), inner_digest.size());
  return outer.finish();
}

inline Sha256::Digest hmac_sha256(const Bytes& key, const Bytes& msg) {
  return hmac_sha256(key.data(), key.size(), msg.data(), msg.size());
}

// RFC 5869 extract-then-expand.
inline Bytes hkdf_sha256(const Bytes& ikm, const Bytes& salt, const Bytes& info,
                         size_t length) {
  if (length > 255 * Sha256::kDigestSize) throw ParamError("hkdf: output too long");
  Bytes effective_salt = salt.empty() ? Bytes(Sha256::kDigestSize, 0) : salt;
  auto prk = hmac_sha256(effective_salt.data(), effective_salt.size(),
                         ikm.data(), ikm.size());
  Bytes okm;
  okm.reserve(length);
  Bytes t;
  uint8_t counter = 1;
  while (okm.size() < length) {
    Bytes block = t;
    block.insert(block.end(), info.begin(), info.end());
    block.push_back(counter++);
    auto d = hmac_sha256(prk.data(), prk.size(), block.data(), block.size());
    t.assign(d.begin(), d.end());
    size_t n = std::min(t.size(), length - okm.size());
    okm.insert(okm.end(), t.begin(), t.begin() + n);
  }
  return okm;
}

}  // namespace qpp
