#pragma once

// Post-handshake record protection. Each direction gets its own record
// subkey (labels "QPP/enc/v1/c2s" and "QPP/enc/v1/s2c") over a shared pad;
// sequence numbers are strictly increasing per direction and double as the
// record nonce, so keystreams never repeat within a session.
//
// Protection is confidentiality-only, matching the underlying cipher; there
// is no per-record MAC and tampering surfaces as garbage plaintext or a
// decode error downstream. An HMAC trailer can be layered on by the
// application if integrity is required.

#include <cstdint>

#include "qpp/cipher.hpp"
#include "qpp/handshake.hpp"
#include "qpp/record.hpp"

namespace qpp {

enum class Direction { kClientToServer, kServerToClient };

class SecureChannel {
 public:
  SecureChannel(const SessionKey& session_key, unsigned n, unsigned m,
                Direction send_direction)
      : send_(make_session(session_key, n, m, send_direction)),
        recv_(make_session(session_key, n, m, opposite(send_direction))) {}

  // Wire bytes for `record` with its payload encrypted under the send
  // direction. record.seq must be exactly one past the previous send.
  Bytes seal(const Record& record) {
    if (record.seq != next_send_seq_)
      throw ReplayError("seal: sequence number must increase by one");
    Record wire = record;
    wire.payload = send_.encrypt_record(record.seq, record.payload);
    ++next_send_seq_;
    return encode_record(wire);
  }

  Record open(const Bytes& wire_bytes) {
    Record wire = decode_record(wire_bytes);
    if (wire.seq != next_recv_seq_)
      throw ReplayError(wire.seq < next_recv_seq_ ? "open: replayed sequence number"
                                                  : "open: out-of-order sequence number");
    Record rec = wire;
    rec.payload = recv_.decrypt_record(wire.seq, wire.payload);
    ++next_recv_seq_;
    return rec;
  }

  uint64_t next_send_seq() const { return next_send_seq_; }
  uint64_t next_recv_seq() const { return next_recv_seq_; }

 private:
  static Direction opposite(Direction d) {
    return d == Direction::kClientToServer ? Direction::kServerToClient
                                           : Direction::kClientToServer;
  }

  static CipherSession make_session(const SessionKey& key, unsigned n, unsigned m,
                                    Direction d) {
    auto label = d == Direction::kClientToServer ? kLabelEncC2s : kLabelEncS2c;
    return CipherSession(generate_pad(key, n, m), derive_subkey(key, label));
  }

  CipherSession send_;
  CipherSession recv_;
  uint64_t next_send_seq_ = 0;
  uint64_t next_recv_seq_ = 0;
};

}  // namespace qpp
