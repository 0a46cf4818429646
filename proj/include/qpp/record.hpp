#pragma once

// Inner-channel wire frames. These records are what the outer transport
// carries as opaque payload. All multi-byte integers are big-endian.
//
//   magic 'Q' 'P', version 0x01, type, seq (8 bytes), length (4 bytes),
//   payload.

#include <cstdint>

#include "qpp/bytes.hpp"

namespace qpp {

enum class RecordType : uint8_t {
  kHandshake = 0x01,
  kData = 0x02,
  kAlert = 0x03,
  kConfirm = 0x04,
};

struct Record {
  RecordType type = RecordType::kData;
  uint64_t seq = 0;
  Bytes payload;

  bool operator==(const Record&) const = default;
};

inline constexpr uint8_t kRecordMagic0 = 0x51;  // 'Q'
inline constexpr uint8_t kRecordMagic1 = 0x50;  // 'P'
inline constexpr uint8_t kRecordVersion = 0x01;
inline constexpr size_t kRecordHeaderSize = 16;
inline constexpr size_t kMaxRecordPayload = 1u << 20;

inline Bytes encode_record(const Record& record) {
  if (record.payload.size() > kMaxRecordPayload)
    throw ParamError("record payload exceeds 1 MiB limit");
  Bytes out;
  out.reserve(kRecordHeaderSize + record.payload.size());
  out.push_back(kRecordMagic0);
  out.push_back(kRecordMagic1);
  out.push_back(kRecordVersion);
  out.push_back(static_cast<uint8_t>(record.type));
  put_u64be(out, record.seq);
  put_u32be(out, static_cast<uint32_t>(record.payload.size()));
  out.insert(out.end(), record.payload.begin(), record.payload.end());
  return out;
}

// Decodes exactly one record; trailing bytes are rejected.
inline Record decode_record(const Bytes& wire) {
  ByteReader r(wire);
  if (r.remaining() < kRecordHeaderSize) throw DecodeError("record: truncated header");
  if (r.u8() != kRecordMagic0 || r.u8() != kRecordMagic1)
    throw DecodeError("record: bad magic");
  if (r.u8() != kRecordVersion) throw DecodeError("record: unsupported version");
  uint8_t type = r.u8();
  if (type < 0x01 || type > 0x04) throw DecodeError("record: unknown type");
  Record rec;
  rec.type = static_cast<RecordType>(type);
  rec.seq = r.u64be();
  uint32_t len = r.u32be();
  if (len > kMaxRecordPayload) throw DecodeError("record: oversize length");
  if (r.remaining() < len) throw DecodeError("record: truncated payload");
  rec.payload = r.take(len);
  r.expect_end();
  return rec;
}

}  // namespace qpp
