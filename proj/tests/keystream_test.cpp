#include "qpp/keystream.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qpp;

namespace {

std::array<uint8_t, 32> subkey_0_to_31() {
  std::array<uint8_t, 32> k;
  for (int i = 0; i < 32; ++i) k[i] = static_cast<uint8_t>(i);
  return k;
}

std::array<uint8_t, 12> nonce_0_to_11() {
  std::array<uint8_t, 12> n;
  for (int i = 0; i < 12; ++i) n[i] = static_cast<uint8_t>(i);
  return n;
}

}  // namespace

TEST(DeriveSubkey, Deterministic) {
  SessionKey key{};
  EXPECT_EQ(derive_subkey(key, kLabelPad), derive_subkey(key, kLabelPad));
}

TEST(DeriveSubkey, LabelsSeparateDomains) {
  SessionKey key{};
  EXPECT_NE(derive_subkey(key, kLabelPad), derive_subkey(key, kLabelEnc));
  EXPECT_NE(derive_subkey(key, kLabelEncC2s), derive_subkey(key, kLabelEncS2c));
}

TEST(DeriveSubkey, GoldenZeroKey) {
  // frozen from the HKDF oracle (tests/oracles/golden_values.py)
  SessionKey key{};
  EXPECT_EQ(to_hex(derive_subkey(key, kLabelPad)),
            "8ed4ca4c1eb8e5542926bfb84f1e38a75a3b7953bf61711f16f682d83cc62abc");
  EXPECT_EQ(to_hex(derive_subkey(key, kLabelEnc)),
            "a18900f129b2a39ada083191cb6a8ccc5442b73f07d5978452ad21c8fec0c87e");
}

TEST(Keystream, InitIsDeterministic) {
  auto a = ks_init(subkey_0_to_31(), nonce_0_to_11());
  auto b = ks_init(subkey_0_to_31(), nonce_0_to_11());
  EXPECT_EQ(a.next_bytes(64), b.next_bytes(64));
}

TEST(Keystream, DifferentNoncesDiffer) {
  auto a = ks_init(subkey_0_to_31(), nonce_0_to_11());
  auto b = ks_init(subkey_0_to_31(), {});
  EXPECT_NE(a.next_bytes(64), b.next_bytes(64));
}

TEST(Keystream, GoldenFirst16) {
  // frozen from the RFC 8439 oracle
  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  EXPECT_EQ(to_hex(ks.next_bytes(16)), "103af111c18b549d39248fb07d60c29a");
}

TEST(Keystream, ZeroCountDraw) {
  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  EXPECT_TRUE(ks.next_bytes(0).empty());
  EXPECT_EQ(ks.position(), 0u);
}

TEST(Keystream, StreamSplittingInvariance) {
  auto whole = ks_init(subkey_0_to_31(), nonce_0_to_11()).next_bytes(64);
  auto split = ks_init(subkey_0_to_31(), nonce_0_to_11());
  Bytes a = split.next_bytes(32);
  Bytes b = split.next_bytes(32);
  a.insert(a.end(), b.begin(), b.end());
  EXPECT_EQ(a, whole);

  // byte-at-a-time draws interleaved with bulk draws
  auto mixed = ks_init(subkey_0_to_31(), nonce_0_to_11());
  Bytes m;
  m.push_back(mixed.next_byte());
  Bytes bulk = mixed.next_bytes(30);
  m.insert(m.end(), bulk.begin(), bulk.end());
  for (int i = 0; i < 33; ++i) m.push_back(mixed.next_byte());
  EXPECT_EQ(m, whole);
  EXPECT_EQ(mixed.position(), 64u);
}

TEST(UniformBelow, BoundOne) {
  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  EXPECT_EQ(ks.uniform_below(1), 0u);
  EXPECT_EQ(ks.position(), 1u);
}

TEST(UniformBelow, Bound256PassesBytesThrough) {
  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  auto expected = ks_init(subkey_0_to_31(), nonce_0_to_11()).next_bytes(8);
  for (int i = 0; i < 8; ++i) EXPECT_EQ(ks.uniform_below(256), expected[i]);
}

TEST(UniformBelow, RejectionRule) {
  // bound 6: limit = 252, so byte 253 is discarded and 3 -> 3.
  // Craft the sequence by searching the real keystream for a >=252 byte.
  auto probe = ks_init(subkey_0_to_31(), nonce_0_to_11());
  Bytes stream = probe.next_bytes(4096);
  size_t i = 0;
  while (!(stream[i] >= 252 && stream[i + 1] < 252)) ++i;

  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  ks.next_bytes(i);  // skip to the rejected byte
  unsigned r = ks.uniform_below(6);
  EXPECT_EQ(r, stream[i + 1] % 6);
  EXPECT_EQ(ks.position(), i + 2);  // two bytes consumed
}

TEST(UniformBelow, BoundValidation) {
  auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
  EXPECT_THROW(ks.uniform_below(0), ParamError);
  EXPECT_THROW(ks.uniform_below(257), ParamError);
}

TEST(UniformBelow, FrequenciesWithinFiveSigma) {
  // spot-check a few bounds here; the acceptance suite is the heavyweight run
  for (unsigned bound : {2u, 3u, 6u, 100u, 255u}) {
    auto ks = ks_init(subkey_0_to_31(), nonce_0_to_11());
    const unsigned draws = 200000;
    std::vector<unsigned> counts(bound, 0);
    for (unsigned i = 0; i < draws; ++i) ++counts[ks.uniform_below(bound)];
    double p = 1.0 / bound;
    double sigma = std::sqrt(draws * p * (1 - p));
    for (unsigned r = 0; r < bound; ++r)
      EXPECT_NEAR(counts[r], draws * p, 5 * sigma) << "bound " << bound << " r " << r;
  }
}
