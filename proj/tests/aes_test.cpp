#include "qpp/aes.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qpp;

namespace {

std::array<uint8_t, 32> key_from_hex(const std::string& hex) {
  Bytes b = from_hex(hex);
  std::array<uint8_t, 32> k;
  std::copy(b.begin(), b.end(), k.begin());
  return k;
}

std::array<uint8_t, 16> iv_from_hex(const std::string& hex) {
  Bytes b = from_hex(hex);
  std::array<uint8_t, 16> iv;
  std::copy(b.begin(), b.end(), iv.begin());
  return iv;
}

}  // namespace

TEST(Aes256, Fips197AppendixC3) {
  Aes256 aes(key_from_hex(
      "000102030405060708090a0b0c0d0e0f101112131415161718191a1b1c1d1e1f"));
  Bytes pt = from_hex("00112233445566778899aabbccddeeff");
  uint8_t ct[16];
  aes.encrypt_block(pt.data(), ct);
  EXPECT_EQ(to_hex(ct, 16), "8ea2b7ca516745bfeafc49904b496089");
}

TEST(Aes256Ctr, Sp80038aF55) {
  // CTR-AES256.Encrypt, all four blocks
  Aes256 aes(key_from_hex(
      "603deb1015ca71be2b73aef0857d77811f352c073b6108d72d9810a30914dff4"));
  auto iv = iv_from_hex("f0f1f2f3f4f5f6f7f8f9fafbfcfdfeff");
  Bytes pt = from_hex(
      "6bc1bee22e409f96e93d7e117393172a"
      "ae2d8a571e03ac9c9eb76fac45af8e51"
      "30c81c46a35ce411e5fbc1191a0a52ef"
      "f69f2445df4f9b17ad2b417be66c3710");
  Bytes ct = aes.ctr_xor(iv, pt);
  EXPECT_EQ(to_hex(ct),
            "601ec313775789a5b7a7f504bbf3d228"
            "f443e3ca4d62b59aca84e990cacaf5c5"
            "2b0930daa23de94ce87017ba2d84988d"
            "dfc9c58db67aada613c2dd08457941a6");
}

TEST(Aes256Ctr, Involution) {
  std::mt19937_64 rng(61);
  std::array<uint8_t, 32> key;
  for (auto& b : key) b = static_cast<uint8_t>(rng());
  std::array<uint8_t, 16> iv;
  for (auto& b : iv) b = static_cast<uint8_t>(rng());
  Aes256 aes(key);
  Bytes data(1000);
  for (auto& b : data) b = static_cast<uint8_t>(rng());
  EXPECT_EQ(aes.ctr_xor(iv, aes.ctr_xor(iv, data)), data);
}

TEST(Aes256Ctr, EmptyInput) {
  Aes256 aes(std::array<uint8_t, 32>{});
  EXPECT_TRUE(aes.ctr_xor(std::array<uint8_t, 16>{}, Bytes{}).empty());
}

TEST(Aes256Ctr, CounterCarriesAcrossBytes) {
  // counter ff..ff wraps to 00..00 on the second block
  Aes256 aes(std::array<uint8_t, 32>{});
  std::array<uint8_t, 16> high_iv;
  high_iv.fill(0xFF);
  Bytes zeros(32, 0x00);
  Bytes stream = aes.ctr_xor(high_iv, zeros);
  uint8_t block0[16], block1[16];
  uint8_t ff[16], zero[16];
  std::fill(ff, ff + 16, 0xFF);
  std::fill(zero, zero + 16, 0x00);
  aes.encrypt_block(ff, block0);
  aes.encrypt_block(zero, block1);
  EXPECT_EQ(to_hex(stream.data(), 16), to_hex(block0, 16));
  EXPECT_EQ(to_hex(stream.data() + 16, 16), to_hex(block1, 16));
}
