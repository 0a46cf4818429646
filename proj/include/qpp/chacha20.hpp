#pragma once

// ChaCha20 block function and keystream per RFC 8439 (96-bit nonce,
// 32-bit block counter).

#include <cstdint>
#include <cstring>
#include <array>

#include "qpp/bytes.hpp"

namespace qpp {

class ChaCha20 {
 public:
  static constexpr size_t kKeySize = 32;
  static constexpr size_t kNonceSize = 12;
  static constexpr size_t kBlockSize = 64;

  using Key = std::array<uint8_t, kKeySize>;
  using Nonce = std::array<uint8_t, kNonceSize>;

  static void block(const Key& key, uint32_t counter, const Nonce& nonce,
                    uint8_t out[kBlockSize]) {
    uint32_t s[16];
    s[0] = 0x61707865;
    s[1] = 0x3320646e;
    s[2] = 0x79622d32;
    s[3] = 0x6b206574;
    for (int i = 0; i < 8; ++i) s[4 + i] = load_le(key.data() + 4 * i);
    s[12] = counter;
    for (int i = 0; i < 3; ++i) s[13 + i] = load_le(nonce.data() + 4 * i);

    uint32_t x[16];
    std::memcpy(x, s, sizeof(x));
    for (int round = 0; round < 10; ++round) {
      quarter(x[0], x[4], x[8], x[12]);
      quarter(x[1], x[5], x[9], x[13]);
      quarter(x[2], x[6], x[10], x[14]);
      quarter(x[3], x[7], x[11], x[15]);
      quarter(x[0], x[5], x[10], x[15]);
      quarter(x[1], x[6], x[11], x[12]);
      quarter(x[2], x[7], x[8], x[13]);
      quarter(x[3], x[4], x[9], x[14]);
    }
    for (int i = 0; i < 16; ++i) store_le(out + 4 * i, x[i] + s[i]);
  }

  // Keystream bytes [offset, offset + len) of the stream that starts at
  // block counter 0.
  static void stream(const Key& key, const Nonce& nonce, uint64_t offset,
                     uint8_t* out, size_t len) {
    uint8_t block_buf[kBlockSize];
    while (len > 0) {
      uint32_t counter = static_cast<uint32_t>(offset / kBlockSize);
      size_t in_block = static_cast<size_t>(offset % kBlockSize);
      if (in_block == 0 && len >= kBlockSize) {
        block(key, counter, nonce, out);  // aligned: skip the bounce buffer
        out += kBlockSize;
        offset += kBlockSize;
        len -= kBlockSize;
        continue;
      }
      block(key, counter, nonce, block_buf);
      size_t n = std::min(len, kBlockSize - in_block);
      std::memcpy(out, block_buf + in_block, n);
      out += n;
      offset += n;
      len -= n;
    }
  }

 private:
  static uint32_t load_le(const uint8_t* p) {
    return static_cast<uint32_t>(p[0]) | static_cast<uint32_t>(p[1]) << 8 |
           static_cast<uint32_t>(p[2]) << 16 | static_cast<uint32_t>(p[3]) << 24;
  }
  static void store_le(uint8_t* p, uint32_t v) {
    p[0] = static_cast<uint8_t>(v);
    p[1] = static_cast<uint8_t>(v >> 8);
    p[2] = static_cast<uint8_t>(v >> 16);
    p[3] = static_cast<uint8_t>(v >> 24);
  }
  static uint32_t rotl(uint32_t v, int n) { return v << n | v >> (32 - n); }
  static void quarter(uint32_t& a, uint32_t& b, uint32_t& c, uint32_t& d) {
    a += b; d ^= a; d = rotl(d, 16);
    c += d; b ^= c; b = rotl(b, 12);
    a += b; d ^= a; d = rotl(d, 8);
    c += d; b ^= c; b = rotl(b, 7);
  }
};

}  // namespace qpp
