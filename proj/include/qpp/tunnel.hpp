#pragma once

// Nested tunnel: the inner handshake + sealed records travel as opaque
// bytes over any WireStream. With the AES outer mode enabled, every wire
// frame is additionally AES-256-CTR wrapped under a pre-shared outer key
// with a per-connection, per-direction IV sent in clear at setup, emulating
// the conventional outer transport layer.
//
// Outer frame format (aes mode): 4-byte big-endian ciphertext length, then
// ciphertext. The CTR keystream runs continuously across frames within a
// direction. In "none" mode inner records go on the wire as-is and are
// delimited by their own headers.

#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <random>
#include <thread>

#include "qpp/aes.hpp"
#include "qpp/bytes.hpp"
#include "qpp/channel.hpp"
#include "qpp/handshake.hpp"
#include "qpp/record.hpp"

namespace qpp {

class WireStream {
 public:
  virtual ~WireStream() = default;
  // Returns bytes read, 0 on clean EOF. Throws IoError on failure/timeout.
  virtual size_t read_some(uint8_t* buf, size_t len) = 0;
  virtual void write_all(const uint8_t* buf, size_t len) = 0;
};

namespace detail {

inline void read_exact(WireStream& s, uint8_t* buf, size_t len) {
  while (len > 0) {
    size_t n = s.read_some(buf, len);
    if (n == 0) throw IoError("unexpected end of stream");
    buf += n;
    len -= n;
  }
}

// Streaming AES-256-CTR at an arbitrary byte offset from the IV.
class OuterCtr {
 public:
  OuterCtr(const std::array<uint8_t, 32>& key, const std::array<uint8_t, 16>& iv)
      : aes_(key), iv_(iv) {}

  void xor_bytes(uint8_t* data, size_t len) {
    while (len > 0) {
      if (stream_used_ == 16) {
        auto counter = iv_;
        add_blocks(counter, offset_ / 16);
        aes_.encrypt_block(counter.data(), stream_);
        stream_used_ = offset_ % 16;
      }
      size_t n = std::min(len, 16 - stream_used_);
      for (size_t i = 0; i < n; ++i) data[i] ^= stream_[stream_used_ + i];
      data += n;
      len -= n;
      stream_used_ += n;
      offset_ += n;
    }
  }

 private:
  static void add_blocks(std::array<uint8_t, 16>& counter, uint64_t blocks) {
    for (int i = 15; i >= 0 && blocks > 0; --i) {
      uint64_t sum = counter[i] + (blocks & 0xFF);
      counter[i] = static_cast<uint8_t>(sum);
      blocks = (blocks >> 8) + (sum >> 8);
    }
  }

  Aes256 aes_;
  std::array<uint8_t, 16> iv_;
  uint64_t offset_ = 0;
  uint8_t stream_[16];
  size_t stream_used_ = 16;
};

}  // namespace detail

enum class OuterMode { kNone, kAes };

// Frames inner-record bytes over the wire, applying the outer layer.
class TunnelConduit {
 public:
  TunnelConduit(WireStream& wire, OuterMode mode,
                const std::array<uint8_t, 32>& outer_key)
      : wire_(wire), mode_(mode) {
    if (mode_ == OuterMode::kAes) {
      std::random_device rd;
      std::array<uint8_t, 16> send_iv;
      for (auto& b : send_iv) b = static_cast<uint8_t>(rd());
      wire_.write_all(send_iv.data(), send_iv.size());
      std::array<uint8_t, 16> recv_iv;
      detail::read_exact(wire_, recv_iv.data(), recv_iv.size());
      send_ctr_.emplace(outer_key, send_iv);
      recv_ctr_.emplace(outer_key, recv_iv);
    }
  }

  void send_frame(Bytes record_bytes) {
    std::lock_guard<std::mutex> lock(send_mutex_);
    if (mode_ == OuterMode::kAes) {
      send_ctr_->xor_bytes(record_bytes.data(), record_bytes.size());
      Bytes framed;
      put_u32be(framed, static_cast<uint32_t>(record_bytes.size()));
      framed.insert(framed.end(), record_bytes.begin(), record_bytes.end());
      wire_.write_all(framed.data(), framed.size());
    } else {
      wire_.write_all(record_bytes.data(), record_bytes.size());
    }
  }

  // Next inner record's raw bytes; empty on clean EOF at a frame boundary.
  Bytes recv_frame() {
    if (mode_ == OuterMode::kAes) {
      uint8_t len_be[4];
      size_t n = wire_.read_some(len_be, 1);
      if (n == 0) return {};
      detail::read_exact(wire_, len_be + 1, 3);
      uint32_t len = 0;
      for (int i = 0; i < 4; ++i) len = len << 8 | len_be[i];
      if (len < kRecordHeaderSize || len > kRecordHeaderSize + kMaxRecordPayload)
        throw DecodeError("outer frame: implausible length");
      Bytes ct(len);
      detail::read_exact(wire_, ct.data(), ct.size());
      recv_ctr_->xor_bytes(ct.data(), ct.size());
      return ct;
    }
    uint8_t header[kRecordHeaderSize];
    size_t n = wire_.read_some(header, 1);
    if (n == 0) return {};
    detail::read_exact(wire_, header + 1, sizeof(header) - 1);
    uint32_t len = 0;
    for (int i = 0; i < 4; ++i) len = len << 8 | header[12 + i];
    if (len > kMaxRecordPayload) throw DecodeError("record: oversize length");
    Bytes out(header, header + sizeof(header));
    out.resize(sizeof(header) + len);
    detail::read_exact(wire_, out.data() + sizeof(header), len);
    return out;
  }

 private:
  WireStream& wire_;
  OuterMode mode_;
  std::mutex send_mutex_;
  std::optional<detail::OuterCtr> send_ctr_;
  std::optional<detail::OuterCtr> recv_ctr_;
};

struct TunnelOptions {
  OuterMode outer = OuterMode::kNone;
  std::array<uint8_t, 32> outer_key{};
  unsigned pad_n = 8;
  unsigned pad_m = 64;
  bool insecure_demo = false;
  // When set, handshake seeds are derived from this instead of OS entropy.
  std::optional<std::array<uint8_t, 32>> deterministic_seed;
  size_t chunk_size = 64 * 1024;
};

// Pull bytes to send; return 0 at end of input. Push received bytes out.
using TunnelSource = std::function<size_t(uint8_t* buf, size_t len)>;
using TunnelSink = std::function<void(const uint8_t* data, size_t len)>;

namespace detail {

inline std::array<uint8_t, 32> tunnel_seed(const TunnelOptions& options) {
  if (options.deterministic_seed) return *options.deterministic_seed;
  std::array<uint8_t, 32> seed;
  std::random_device rd;
  for (auto& b : seed) b = static_cast<uint8_t>(rd());
  return seed;
}

inline HandshakeConfig tunnel_config(const TunnelOptions& options) {
  if (!options.insecure_demo)
    throw ParamError("tunnel: mock-KEM handshake requires --insecure-demo");
  HandshakeConfig config;
  config.kems.push_back(std::make_shared<MockKem>(MockKem::InsecureAck{true}));
  config.pad_n = options.pad_n;
  config.pad_m = options.pad_m;
  return config;
}

// Full-duplex relay: source -> sealed data records, received records ->
// sink. A "close" alert marks end of the peer's input.
inline void relay(TunnelConduit& conduit, SecureChannel& channel,
                  const TunnelSource& source, const TunnelSink& sink,
                  size_t chunk_size) {
  std::exception_ptr sender_error;
  std::thread sender([&] {
    try {
      Bytes chunk(chunk_size);
      for (;;) {
        size_t n = source(chunk.data(), chunk.size());
        if (n == 0) break;
        Record rec;
        rec.type = RecordType::kData;
        rec.seq = channel.next_send_seq();
        rec.payload.assign(chunk.begin(), chunk.begin() + n);
        conduit.send_frame(channel.seal(rec));
      }
      Record close_rec;
      close_rec.type = RecordType::kAlert;
      close_rec.seq = channel.next_send_seq();
      close_rec.payload = to_bytes("close");
      conduit.send_frame(channel.seal(close_rec));
    } catch (...) {
      sender_error = std::current_exception();
    }
  });

  std::exception_ptr receiver_error;
  try {
    for (;;) {
      Bytes frame = conduit.recv_frame();
      if (frame.empty()) break;  // peer hung up
      Record rec = channel.open(frame);
      if (rec.type == RecordType::kAlert) break;
      if (rec.type != RecordType::kData)
        throw DecodeError("tunnel: unexpected record type after handshake");
      sink(rec.payload.data(), rec.payload.size());
    }
  } catch (...) {
    receiver_error = std::current_exception();
  }
  sender.join();
  if (receiver_error) std::rethrow_exception(receiver_error);
  if (sender_error) std::rethrow_exception(sender_error);
}

}  // namespace detail

inline void run_tunnel_client(WireStream& wire, const TunnelOptions& options,
                              const TunnelSource& source, const TunnelSink& sink) {
  HandshakeConfig config = detail::tunnel_config(options);
  TunnelConduit conduit(wire, options.outer, options.outer_key);

  // any failure before the channel is up is a handshake failure, whatever
  // its mechanical cause (garbled bytes, wrong outer key, peer hangup)
  HandshakeResult result = [&]() -> HandshakeResult {
    try {
      auto [state, hello] = client_init(config, detail::tunnel_seed(options));
      Record hs_rec{RecordType::kHandshake, 0, state.hello_msg};
      conduit.send_frame(encode_record(hs_rec));

      Bytes reply = conduit.recv_frame();
      if (reply.empty())
        throw AuthError("handshake_failure: connection closed during handshake");
      Record reply_rec = decode_record(reply);
      if (reply_rec.type != RecordType::kHandshake)
        throw AuthError("handshake_failure: expected handshake record");
      return client_finish(state, reply_rec.payload);
    } catch (const AuthError&) {
      throw;
    } catch (const DecodeError& e) {
      throw AuthError(std::string("handshake_failure: ") + e.what());
    } catch (const IoError& e) {
      throw AuthError(std::string("handshake_failure: ") + e.what());
    }
  }();

  SecureChannel channel(result.session_key, result.pad_n, result.pad_m,
                        Direction::kClientToServer);
  detail::relay(conduit, channel, source, sink, options.chunk_size);
}

inline void run_tunnel_server(WireStream& wire, const TunnelOptions& options,
                              const TunnelSource& source, const TunnelSink& sink) {
  HandshakeConfig config = detail::tunnel_config(options);
  TunnelConduit conduit(wire, options.outer, options.outer_key);

  ServerResponse resp = [&]() -> ServerResponse {
    try {
      Bytes hello_frame = conduit.recv_frame();
      if (hello_frame.empty())
        throw AuthError("handshake_failure: connection closed during handshake");
      Record hello_rec = decode_record(hello_frame);
      if (hello_rec.type != RecordType::kHandshake)
        throw AuthError("handshake_failure: expected handshake record");
      return server_respond(config, hello_rec.payload, detail::tunnel_seed(options));
    } catch (const AuthError&) {
      throw;
    } catch (const DecodeError& e) {
      throw AuthError(std::string("handshake_failure: ") + e.what());
    } catch (const IoError& e) {
      throw AuthError(std::string("handshake_failure: ") + e.what());
    }
  }();

  Record hs_rec{RecordType::kHandshake, 0, resp.hello_msg};
  conduit.send_frame(encode_record(hs_rec));

  SecureChannel channel(resp.result.session_key, resp.result.pad_n,
                        resp.result.pad_m, Direction::kServerToClient);
  detail::relay(conduit, channel, source, sink, options.chunk_size);
}

}  // namespace qpp
