#pragma once

// Portable software AES-256 (FIPS 197) and CTR mode (SP 800-38A, big-endian
// counter increment). Deliberately plain S-box code, no hardware paths: this
// is the software baseline the benchmark compares against.

#include <cstdint>
#include <cstring>
#include <array>

#include "qpp/bytes.hpp"

namespace qpp {

class Aes256 {
 public:
  static constexpr size_t kKeySize = 32;
  static constexpr size_t kBlockSize = 16;
  static constexpr int kRounds = 14;

  explicit Aes256(const std::array<uint8_t, kKeySize>& key) { expand_key(key); }

  void encrypt_block(const uint8_t in[kBlockSize], uint8_t out[kBlockSize]) const {
    uint8_t state[16];
    std::memcpy(state, in, 16);
    add_round_key(state, 0);
    for (int round = 1; round < kRounds; ++round) {
      sub_bytes(state);
      shift_rows(state);
      mix_columns(state);
      add_round_key(state, round);
    }
    sub_bytes(state);
    shift_rows(state);
    add_round_key(state, kRounds);
    std::memcpy(out, state, 16);
  }

  // CTR keystream XOR; encryption and decryption are the same operation.
  void ctr_xor(const std::array<uint8_t, kBlockSize>& iv, const uint8_t* in,
               uint8_t* out, size_t len) const {
    uint8_t counter[16];
    std::memcpy(counter, iv.data(), 16);
    uint8_t stream[16];
    while (len > 0) {
      encrypt_block(counter, stream);
      size_t n = std::min(len, kBlockSize);
      for (size_t i = 0; i < n; ++i) out[i] = in[i] ^ stream[i];
      in += n;
      out += n;
      len -= n;
      increment(counter);
    }
  }

  Bytes ctr_xor(const std::array<uint8_t, kBlockSize>& iv, const Bytes& data) const {
    Bytes out(data.size());
    ctr_xor(iv, data.data(), out.data(), data.size());
    return out;
  }

 private:
  static constexpr uint8_t sbox_[256] = {
      0x63, 0x7c, 0x77, 0x7b, 0xf2, 0x6b, 0x6f, 0xc5, 0x30, 0x01, 0x67, 0x2b,
      0xfe, 0xd7, 0xab, 0x76, 0xca, 0x82, 0xc9, 0x7d, 0xfa, 0x59, 0x47, 0xf0,
      0xad, 0xd4, 0xa2, 0xaf, 0x9c, 0xa4, 0x72, 0xc0, 0xb7, 0xfd, 0x93, 0x26,
      0x36, 0x3f, 0xf7, 0xcc, 0x34, 0xa5, 0xe5, 0xf1, 0x71, 0xd8, 0x31, 0x15,
      0x04, 0xc7, 0x23, 0xc3, 0x18, 0x96, 0x05, 0x9a, 0x07, 0x12, 0x80, 0xe2,
      0xeb, 0x27, 0xb2, 0x75, 0x09, 0x83, 0x2c, 0x1a, 0x1b, 0x6e, 0x5a, 0xa0,
      0x52, 0x3b, 0xd6, 0xb3, 0x29, 0xe3, 0x2f, 0x84, 0x53, 0xd1, 0x00, 0xed,
      0x20, 0xfc, 0xb1, 0x5b, 0x6a, 0xcb, 0xbe, 0x39, 0x4a, 0x4c, 0x58, 0xcf,
      0xd0, 0xef, 0xaa, 0xfb, 0x43, 0x4d, 0x33, 0x85, 0x45, 0xf9, 0x02, 0x7f,
      0x50, 0x3c, 0x9f, 0xa8, 0x51, 0xa3, 0x40, 0x8f, 0x92, 0x9d, 0x38, 0xf5,
      0xbc, 0xb6, 0xda, 0x21, 0x10, 0xff, 0xf3, 0xd2, 0xcd, 0x0c, 0x13, 0xec,
      0x5f, 0x97, 0x44, 0x17, 0xc4, 0xa7, 0x7e, 0x3d, 0x64, 0x5d, 0x19, 0x73,
      0x60, 0x81, 0x4f, 0xdc, 0x22, 0x2a, 0x90, 0x88, 0x46, 0xee, 0xb8, 0x14,
      0xde, 0x5e, 0x0b, 0xdb, 0xe0, 0x32, 0x3a, 0x0a, 0x49, 0x06, 0x24, 0x5c,
      0xc2, 0xd3, 0xac, 0x62, 0x91, 0x95, 0xe4, 0x79, 0xe7, 0xc8, 0x37, 0x6d,
      0x8d, 0xd5, 0x4e, 0xa9, 0x6c, 0x56, 0xf4, 0xea, 0x65, 0x7a, 0xae, 0x08,
      0xba, 0x78, 0x25, 0x2e, 0x1c, 0xa6, 0xb4, 0xc6, 0xe8, 0xdd, 0x74, 0x1f,
      0x4b, 0xbd, 0x8b, 0x8a, 0x70, 0x3e, 0xb5, 0x66, 0x48, 0x03, 0xf6, 0x0e,
      0x61, 0x35, 0x57, 0xb9, 0x86, 0xc1, 0x1d, 0x9e, 0xe1, 0xf8, 0x98, 0x11,
      0x69, 0xd9, 0x8e, 0x94, 0x9b, 0x1e, 0x87, 0xe9, 0xce, 0x55, 0x28, 0xdf,
      0x8c, 0xa1, 0x89, 0x0d, 0xbf, 0xe6, 0x42, 0x68, 0x41, 0x99, 0x2d, 0x0f,
      0xb0, 0x54, 0xbb, 0x16};

  static uint8_t xtime(uint8_t x) {
    return static_cast<uint8_t>(x << 1 ^ ((x >> 7) * 0x1b));
  }

  void expand_key(const std::array<uint8_t, kKeySize>& key) {
    constexpr int nk = 8;                    // 32-bit words in the key
    constexpr int nw = 4 * (kRounds + 1);    // total schedule words
    std::memcpy(round_keys_, key.data(), kKeySize);
    uint8_t rcon = 0x01;
    for (int i = nk; i < nw; ++i) {
      uint8_t t[4];
      std::memcpy(t, round_keys_ + 4 * (i - 1), 4);
      if (i % nk == 0) {
        uint8_t tmp = t[0];
        t[0] = static_cast<uint8_t>(sbox_[t[1]] ^ rcon);
        t[1] = sbox_[t[2]];
        t[2] = sbox_[t[3]];
        t[3] = sbox_[tmp];
        rcon = xtime(rcon);
      } else if (i % nk == 4) {
        for (int j = 0; j < 4; ++j) t[j] = sbox_[t[j]];
      }
      for (int j = 0; j < 4; ++j)
        round_keys_[4 * i + j] = round_keys_[4 * (i - nk) + j] ^ t[j];
    }
  }

  void add_round_key(uint8_t state[16], int round) const {
    const uint8_t* rk = round_keys_ + 16 * round;
    for (int i = 0; i < 16; ++i) state[i] ^= rk[i];
  }

  static void sub_bytes(uint8_t state[16]) {
    for (int i = 0; i < 16; ++i) state[i] = sbox_[state[i]];
  }

  // state is column-major: state[4*c + r]
  static void shift_rows(uint8_t state[16]) {
    uint8_t t;
    t = state[1]; state[1] = state[5]; state[5] = state[9];
    state[9] = state[13]; state[13] = t;
    std::swap(state[2], state[10]);
    std::swap(state[6], state[14]);
    t = state[15]; state[15] = state[11]; state[11] = state[7];
    state[7] = state[3]; state[3] = t;
  }

  static void mix_columns(uint8_t state[16]) {
    for (int c = 0; c < 4; ++c) {
      uint8_t* col = state + 4 * c;
      uint8_t a0 = col[0], a1 = col[1], a2 = col[2], a3 = col[3];
      uint8_t all = a0 ^ a1 ^ a2 ^ a3;
      col[0] = static_cast<uint8_t>(a0 ^ all ^ xtime(a0 ^ a1));
      col[1] = static_cast<uint8_t>(a1 ^ all ^ xtime(a1 ^ a2));
      col[2] = static_cast<uint8_t>(a2 ^ all ^ xtime(a2 ^ a3));
      col[3] = static_cast<uint8_t>(a3 ^ all ^ xtime(a3 ^ a0));
    }
  }

  static void increment(uint8_t counter[16]) {
    for (int i = 15; i >= 0; --i)
      if (++counter[i] != 0) break;
  }

  uint8_t round_keys_[16 * (kRounds + 1)];
};

inline Bytes aes256_ctr(const std::array<uint8_t, 32>& key,
                        const std::array<uint8_t, 16>& iv, const Bytes& data) {
  return Aes256(key).ctr_xor(iv, data);
}

}  // namespace qpp
