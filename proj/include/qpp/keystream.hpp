#pragma once

// Deterministic keystream and subkey derivation feeding pad generation and
// record encryption. Keystream = ChaCha20 under (subkey, nonce), block
// counter starting at 0; subkeys = HKDF-SHA-256 of the session key under
// domain-separation labels.

#include <cstdint>
#include <array>
#include <string_view>

#include "qpp/bytes.hpp"
#include "qpp/chacha20.hpp"
#include "qpp/sha256.hpp"

namespace qpp {

struct SessionKey {
  std::array<uint8_t, 32> bytes{};

  static SessionKey from(const Bytes& b) {
    if (b.size() != 32) throw ParamError("session key must be 32 bytes");
    SessionKey k;
    std::copy(b.begin(), b.end(), k.bytes.begin());
    return k;
  }
};

inline constexpr std::string_view kLabelPad = "QPP/pad/v1";
inline constexpr std::string_view kLabelEnc = "QPP/enc/v1";
inline constexpr std::string_view kLabelEncC2s = "QPP/enc/v1/c2s";
inline constexpr std::string_view kLabelEncS2c = "QPP/enc/v1/s2c";

inline std::array<uint8_t, 32> derive_subkey(const SessionKey& key,
                                             std::string_view label) {
  Bytes ikm(key.bytes.begin(), key.bytes.end());
  Bytes okm = hkdf_sha256(ikm, {}, to_bytes(label), 32);
  std::array<uint8_t, 32> out;
  std::copy(okm.begin(), okm.end(), out.begin());
  return out;
}

// Sequential keystream reader. Two states with equal (subkey, nonce,
// position) emit identical future bytes; position advances by exactly the
// number of bytes drawn.
class KeystreamState {
 public:
  KeystreamState(const std::array<uint8_t, 32>& subkey,
                 const std::array<uint8_t, 12>& nonce)
      : subkey_(subkey), nonce_(nonce) {}

  uint64_t position() const { return position_; }

  void next_bytes(uint8_t* out, size_t count) {
    ChaCha20::stream(subkey_, nonce_, position_, out, count);
    position_ += count;
    buffered_ = 0;  // buffered lookahead now points at consumed positions
  }

  Bytes next_bytes(size_t count) {
    Bytes out(count);
    next_bytes(out.data(), count);
    return out;
  }

  uint8_t next_byte() {
    if (buffered_ == 0) refill();
    --buffered_;
    ++position_;
    return buffer_[buffer_pos_++];
  }

  // Uniform draw in [0, bound) by single-byte rejection sampling.
  // bound must be in [1, 256]; bound == 256 passes bytes through verbatim.
  unsigned uniform_below(unsigned bound) {
    if (bound < 1 || bound > 256) throw ParamError("uniform_below: bound out of range");
    unsigned limit = 256 - (256 % bound);
    for (;;) {
      unsigned b = next_byte();
      if (b < limit) return b % bound;
    }
  }

 private:
  void refill() {
    // buffer_ holds positions [position_, position_ + buffered_)
    ChaCha20::stream(subkey_, nonce_, position_, buffer_, sizeof(buffer_));
    buffer_pos_ = 0;
    buffered_ = sizeof(buffer_);
  }

  std::array<uint8_t, 32> subkey_;
  std::array<uint8_t, 12> nonce_;
  uint64_t position_ = 0;
  uint8_t buffer_[256];
  size_t buffer_pos_ = 0;
  size_t buffered_ = 0;
};

inline KeystreamState ks_init(const std::array<uint8_t, 32>& subkey,
                              const std::array<uint8_t, 12>& nonce) {
  return KeystreamState(subkey, nonce);
}

}  // namespace qpp
