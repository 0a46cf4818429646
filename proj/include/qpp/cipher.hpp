#pragma once

// Record encryption: per byte, one keystream byte masks the plaintext and a
// second selects the permutation gate. Each record derives a disjoint
// keystream from its sequence number.

#include <cstdint>
#include <vector>

#include "qpp/keystream.hpp"
#include "qpp/pad.hpp"

namespace qpp {

class CipherSession {
 public:
  CipherSession(QppPad pad, const std::array<uint8_t, 32>& enc_subkey)
      : pad_(std::move(pad)), enc_subkey_(enc_subkey) {
    flatten(pad_.gates(), forward_);
    flatten(pad_.inverse_gates(), inverse_);
  }

  // Standalone construction: pad and record subkey both from one session key.
  static CipherSession from_key(const SessionKey& key, unsigned n, unsigned m) {
    return CipherSession(generate_pad(key, n, m), derive_subkey(key, kLabelEnc));
  }

  const QppPad& pad() const { return pad_; }

  Bytes encrypt_record(uint64_t seq, const Bytes& plaintext) const {
    return process(seq, plaintext, /*encrypt=*/true);
  }

  Bytes decrypt_record(uint64_t seq, const Bytes& ciphertext) const {
    return process(seq, ciphertext, /*encrypt=*/false);
  }

  static std::array<uint8_t, 12> record_nonce(uint64_t seq) {
    std::array<uint8_t, 12> nonce{};
    for (int i = 0; i < 8; ++i)
      nonce[4 + i] = static_cast<uint8_t>(seq >> (56 - 8 * i));
    return nonce;
  }

 private:
  void flatten(const std::vector<PermutationGate>& gates,
               std::vector<uint8_t>& out) const {
    unsigned size = pad_.symbol_count();
    out.resize(gates.size() * size);
    for (size_t g = 0; g < gates.size(); ++g)
      for (unsigned x = 0; x < size; ++x)
        out[g * size + x] = static_cast<uint8_t>(gates[g].mapping[x]);
  }

  Bytes process(uint64_t seq, const Bytes& input, bool encrypt) const {
    Bytes output(input.size());
    auto ks = ks_init(enc_subkey_, record_nonce(seq));
    const std::vector<uint8_t>& fwd = forward_;
    const std::vector<uint8_t>& inv = inverse_;
    // valid M always divides the symbol count, so it is a power of two and
    // the per-byte "mod M" reduces to a mask
    const uint8_t m_mask = static_cast<uint8_t>(pad_.gate_count() - 1);

    constexpr size_t kChunk = 4096;
    std::vector<uint8_t> stream(2 * kChunk);
    size_t done = 0;
    while (done < input.size()) {
      size_t n = std::min(kChunk, input.size() - done);
      ks.next_bytes(stream.data(), 2 * n);
      if (pad_.n() == 8) {
        for (size_t i = 0; i < n; ++i) {
          uint8_t r0 = stream[2 * i];
          uint8_t r1 = stream[2 * i + 1];
          size_t base = static_cast<size_t>(r1 & m_mask) << 8;
          if (encrypt) {
            output[done + i] = fwd[base + (input[done + i] ^ r0)];
          } else {
            output[done + i] = static_cast<uint8_t>(inv[base + input[done + i]] ^ r0);
          }
        }
      } else {
        for (size_t i = 0; i < n; ++i) {
          uint8_t r0 = stream[2 * i];
          uint8_t r1 = stream[2 * i + 1];
          uint8_t b = input[done + i];
          size_t base_hi = static_cast<size_t>((r1 >> 4) & m_mask) << 4;
          size_t base_lo = static_cast<size_t>(r1 & 0x0F & m_mask) << 4;
          if (encrypt) {
            uint8_t hi = fwd[base_hi + ((b >> 4) ^ (r0 >> 4))];
            uint8_t lo = fwd[base_lo + ((b & 0x0F) ^ (r0 & 0x0F))];
            output[done + i] = static_cast<uint8_t>(hi << 4 | lo);
          } else {
            uint8_t hi = static_cast<uint8_t>(inv[base_hi + (b >> 4)] ^ (r0 >> 4));
            uint8_t lo = static_cast<uint8_t>(inv[base_lo + (b & 0x0F)] ^ (r0 & 0x0F));
            output[done + i] = static_cast<uint8_t>(hi << 4 | lo);
          }
        }
      }
      done += n;
    }
    return output;
  }

  QppPad pad_;
  std::array<uint8_t, 32> enc_subkey_;
  std::vector<uint8_t> forward_;   // gate tables flattened for the hot loop
  std::vector<uint8_t> inverse_;
};

}  // namespace qpp
