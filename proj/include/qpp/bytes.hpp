#pragma once

#include <cstdint>
#include <cstring>
#include <array>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qpp {

using Bytes = std::vector<uint8_t>;

// Error taxonomy shared by the codec, handshake and record layers.
struct ParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct AuthError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ReplayError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline Bytes to_bytes(std::string_view s) {
  return Bytes(s.begin(), s.end());
}

inline std::string to_hex(const uint8_t* data, size_t len) {
  static const char* digits = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (size_t i = 0; i < len; ++i) {
    out.push_back(digits[data[i] >> 4]);
    out.push_back(digits[data[i] & 0x0F]);
  }
  return out;
}

inline std::string to_hex(const Bytes& b) { return to_hex(b.data(), b.size()); }

template <size_t N>
std::string to_hex(const std::array<uint8_t, N>& a) {
  return to_hex(a.data(), N);
}

inline Bytes from_hex(std::string_view hex) {
  if (hex.size() % 2 != 0) throw ParamError("odd-length hex string");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    throw ParamError("invalid hex digit");
  };
  Bytes out(hex.size() / 2);
  for (size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
  return out;
}

inline void put_u16be(Bytes& out, uint16_t v) {
  out.push_back(static_cast<uint8_t>(v >> 8));
  out.push_back(static_cast<uint8_t>(v));
}

inline void put_u32be(Bytes& out, uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

inline void put_u64be(Bytes& out, uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) out.push_back(static_cast<uint8_t>(v >> s));
}

// Cursor over an immutable byte buffer; every read is bounds-checked and
// failures surface as DecodeError.
class ByteReader {
 public:
  ByteReader(const uint8_t* data, size_t len) : data_(data), len_(len) {}
  explicit ByteReader(const Bytes& b) : ByteReader(b.data(), b.size()) {}

  size_t remaining() const { return len_ - pos_; }
  bool empty() const { return pos_ == len_; }

  uint8_t u8() {
    need(1);
    return data_[pos_++];
  }
  uint16_t u16be() {
    need(2);
    uint16_t v = static_cast<uint16_t>(data_[pos_] << 8 | data_[pos_ + 1]);
    pos_ += 2;
    return v;
  }
  uint32_t u32be() {
    need(4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 4;
    return v;
  }
  uint64_t u64be() {
    need(8);
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = v << 8 | data_[pos_ + i];
    pos_ += 8;
    return v;
  }
  Bytes take(size_t n) {
    need(n);
    Bytes out(data_ + pos_, data_ + pos_ + n);
    pos_ += n;
    return out;
  }
  template <size_t N>
  std::array<uint8_t, N> take_array() {
    need(N);
    std::array<uint8_t, N> out;
    std::memcpy(out.data(), data_ + pos_, N);
    pos_ += N;
    return out;
  }
  void expect_end() const {
    if (pos_ != len_) throw DecodeError("trailing bytes after message");
  }

 private:
  void need(size_t n) const {
    if (len_ - pos_ < n) throw DecodeError("truncated message");
  }
  const uint8_t* data_;
  size_t len_;
  size_t pos_ = 0;
};

}  // namespace qpp
