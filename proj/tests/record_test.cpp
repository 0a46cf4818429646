#include "qpp/record.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qpp;

TEST(Record, SpecifiedWireLayout) {
  Record r{RecordType::kData, 1, to_bytes("hi")};
  EXPECT_EQ(to_hex(encode_record(r)),
            "515001020000000000000001000000026869");
}

TEST(Record, RoundtripRandom) {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 200; ++trial) {
    Record r;
    r.type = static_cast<RecordType>(1 + rng() % 4);
    r.seq = rng();
    r.payload.resize(rng() % 1000);
    for (auto& b : r.payload) b = static_cast<uint8_t>(rng());
    EXPECT_EQ(decode_record(encode_record(r)), r);
  }
}

TEST(Record, OversizePayloadRejectedOnEncode) {
  Record r;
  r.payload.resize(kMaxRecordPayload + 1);
  EXPECT_THROW(encode_record(r), ParamError);
}

TEST(Record, DecodeErrorsAreDistinct) {
  Record r{RecordType::kData, 7, to_bytes("payload")};
  Bytes wire = encode_record(r);

  Bytes bad_magic = wire;
  bad_magic[0] ^= 0xFF;
  EXPECT_THROW(decode_record(bad_magic), DecodeError);

  Bytes bad_version = wire;
  bad_version[2] = 0x02;
  EXPECT_THROW(decode_record(bad_version), DecodeError);

  Bytes bad_type = wire;
  bad_type[3] = 0x09;
  EXPECT_THROW(decode_record(bad_type), DecodeError);

  for (size_t cut : {size_t{0}, size_t{1}, size_t{15}, wire.size() - 1}) {
    Bytes truncated(wire.begin(), wire.begin() + cut);
    EXPECT_THROW(decode_record(truncated), DecodeError) << "cut " << cut;
  }

  Bytes oversize = wire;
  oversize[12] = 0xFF;  // declared length far beyond the limit
  EXPECT_THROW(decode_record(oversize), DecodeError);

  Bytes trailing = wire;
  trailing.push_back(0x00);
  EXPECT_THROW(decode_record(trailing), DecodeError);
}
