#pragma once

// Minimal KEM-based handshake with HMAC key confirmation. One round trip:
// ClientHello carries a fresh KEM public key and the desired pad parameters,
// ServerHello carries the encapsulation and a confirmation tag over the
// transcript. No certificates or signatures; a signature hook can be added
// to ServerHello later.

#include <cstdint>
#include <memory>
#include <vector>

#include "qpp/bytes.hpp"
#include "qpp/kem.hpp"
#include "qpp/keystream.hpp"
#include "qpp/pad.hpp"
#include "qpp/sha256.hpp"

namespace qpp {

inline constexpr uint8_t kHandshakeVersion = 0x01;
inline constexpr uint16_t kMsgClientHello = 0x0001;
inline constexpr uint16_t kMsgServerHello = 0x0002;

struct HandshakeConfig {
  std::vector<std::shared_ptr<KemAlgorithm>> kems;
  unsigned pad_n = 8;
  unsigned pad_m = 64;
};

struct ClientHello {
  uint8_t version = kHandshakeVersion;
  std::array<uint8_t, 32> client_random{};
  std::vector<uint16_t> kem_ids;
  Bytes kem_public_key;
  unsigned pad_n = 8;
  unsigned pad_m = 64;
};

struct ServerHello {
  uint8_t version = kHandshakeVersion;
  std::array<uint8_t, 32> server_random{};
  uint16_t chosen_kem_id = 0;
  Bytes kem_ciphertext;
  std::array<uint8_t, 32> server_confirm{};
};

// Message bytes = 2-byte message type + body. These are the bytes the
// transcript hash is computed over (ServerHello with the confirm zeroed).

inline Bytes encode_client_hello(const ClientHello& ch) {
  Bytes out;
  put_u16be(out, kMsgClientHello);
  out.push_back(ch.version);
  out.insert(out.end(), ch.client_random.begin(), ch.client_random.end());
  if (ch.kem_ids.empty() || ch.kem_ids.size() > 255)
    throw ParamError("client hello: kem id list size");
  out.push_back(static_cast<uint8_t>(ch.kem_ids.size()));
  for (uint16_t id : ch.kem_ids) put_u16be(out, id);
  if (ch.kem_public_key.size() > 0xFFFF)
    throw ParamError("client hello: public key too long");
  put_u16be(out, static_cast<uint16_t>(ch.kem_public_key.size()));
  out.insert(out.end(), ch.kem_public_key.begin(), ch.kem_public_key.end());
  out.push_back(static_cast<uint8_t>(ch.pad_n));
  put_u16be(out, static_cast<uint16_t>(ch.pad_m));
  return out;
}

inline ClientHello decode_client_hello(const Bytes& msg) {
  ByteReader r(msg);
  if (r.u16be() != kMsgClientHello) throw DecodeError("client hello: bad message type");
  ClientHello ch;
  ch.version = r.u8();
  if (ch.version != kHandshakeVersion)
    throw DecodeError("client hello: unsupported version");
  ch.client_random = r.take_array<32>();
  uint8_t count = r.u8();
  if (count == 0) throw DecodeError("client hello: empty kem id list");
  for (unsigned i = 0; i < count; ++i) ch.kem_ids.push_back(r.u16be());
  ch.kem_public_key = r.take(r.u16be());
  ch.pad_n = r.u8();
  ch.pad_m = r.u16be();
  QppPad::check_params(ch.pad_n, ch.pad_m);
  r.expect_end();
  return ch;
}

inline Bytes encode_server_hello(const ServerHello& sh, bool zero_confirm = false) {
  Bytes out;
  put_u16be(out, kMsgServerHello);
  out.push_back(sh.version);
  out.insert(out.end(), sh.server_random.begin(), sh.server_random.end());
  put_u16be(out, sh.chosen_kem_id);
  if (sh.kem_ciphertext.size() > 0xFFFF)
    throw ParamError("server hello: ciphertext too long");
  put_u16be(out, static_cast<uint16_t>(sh.kem_ciphertext.size()));
  out.insert(out.end(), sh.kem_ciphertext.begin(), sh.kem_ciphertext.end());
  if (zero_confirm)
    out.insert(out.end(), 32, 0);
  else
    out.insert(out.end(), sh.server_confirm.begin(), sh.server_confirm.end());
  return out;
}

inline ServerHello decode_server_hello(const Bytes& msg) {
  ByteReader r(msg);
  if (r.u16be() != kMsgServerHello) throw DecodeError("server hello: bad message type");
  ServerHello sh;
  sh.version = r.u8();
  if (sh.version != kHandshakeVersion)
    throw DecodeError("server hello: unsupported version");
  sh.server_random = r.take_array<32>();
  sh.chosen_kem_id = r.u16be();
  sh.kem_ciphertext = r.take(r.u16be());
  sh.server_confirm = r.take_array<32>();
  r.expect_end();
  return sh;
}

inline SessionKey derive_session_key(const Bytes& shared_secret,
                                     const Sha256::Digest& transcript_hash) {
  if (shared_secret.empty()) throw ParamError("derive_session_key: empty shared secret");
  Bytes info = to_bytes("QPP-NESTED-v1");
  info.insert(info.end(), transcript_hash.begin(), transcript_hash.end());
  return SessionKey::from(hkdf_sha256(shared_secret, {}, info, 32));
}

namespace detail {

inline std::array<uint8_t, 32> hs_label_expand(const std::array<uint8_t, 32>& seed,
                                               std::string_view label) {
  Bytes ikm(seed.begin(), seed.end());
  Bytes okm = hkdf_sha256(ikm, {}, to_bytes(label), 32);
  std::array<uint8_t, 32> out;
  std::copy(okm.begin(), okm.end(), out.begin());
  return out;
}

inline Sha256::Digest transcript_hash(const Bytes& client_hello_msg,
                                      const ServerHello& sh) {
  Sha256 h;
  h.update(client_hello_msg);
  h.update(encode_server_hello(sh, /*zero_confirm=*/true));
  return h.finish();
}

inline Sha256::Digest confirm_tag(const SessionKey& session_key,
                                  const Sha256::Digest& transcript) {
  Bytes msg = to_bytes("srv-fin");
  msg.insert(msg.end(), transcript.begin(), transcript.end());
  Bytes key(session_key.bytes.begin(), session_key.bytes.end());
  return hmac_sha256(key, msg);
}

}  // namespace detail

struct ClientHandshake {
  HandshakeConfig config;
  Bytes hello_msg;  // transcript input
  KemKeyPair key_pair;
  uint16_t offered_first_kem = 0;
};

struct HandshakeResult {
  SessionKey session_key;
  unsigned pad_n = 8;
  unsigned pad_m = 64;
};

inline std::pair<ClientHandshake, ClientHello> client_init(
    const HandshakeConfig& config, const std::array<uint8_t, 32>& key_seed) {
  if (config.kems.empty()) throw ParamError("client_init: no KEMs configured");
  QppPad::check_params(config.pad_n, config.pad_m);
  ClientHandshake state;
  state.config = config;

  ClientHello ch;
  ch.client_random = detail::hs_label_expand(key_seed, "QPP/hs/client-random");
  for (const auto& kem : config.kems) ch.kem_ids.push_back(kem->identifier());
  state.key_pair =
      config.kems.front()->keygen(detail::hs_label_expand(key_seed, "QPP/hs/kem-keygen"));
  state.offered_first_kem = config.kems.front()->identifier();
  ch.kem_public_key = state.key_pair.public_key;
  ch.pad_n = config.pad_n;
  ch.pad_m = config.pad_m;
  state.hello_msg = encode_client_hello(ch);
  return {std::move(state), std::move(ch)};
}

struct ServerResponse {
  HandshakeResult result;
  ServerHello hello;
  Bytes hello_msg;
};

inline ServerResponse server_respond(const HandshakeConfig& config,
                                     const Bytes& client_hello_msg,
                                     const std::array<uint8_t, 32>& seed) {
  ClientHello ch = decode_client_hello(client_hello_msg);

  // Pick the first offered KEM we support; the public key in the hello
  // belongs to the client's first offer, so only that one is usable.
  std::shared_ptr<KemAlgorithm> chosen;
  for (const auto& kem : config.kems) {
    if (kem->identifier() == ch.kem_ids.front()) {
      chosen = kem;
      break;
    }
  }
  if (!chosen) throw AuthError("handshake_failure: no common KEM");

  ServerHello sh;
  sh.server_random = detail::hs_label_expand(seed, "QPP/hs/server-random");
  sh.chosen_kem_id = chosen->identifier();
  auto enc = chosen->encapsulate(ch.kem_public_key,
                                 detail::hs_label_expand(seed, "QPP/hs/kem-encap"));
  sh.kem_ciphertext = enc.ciphertext;

  auto transcript = detail::transcript_hash(client_hello_msg, sh);
  SessionKey session_key = derive_session_key(enc.shared_secret, transcript);
  sh.server_confirm = detail::confirm_tag(session_key, transcript);

  ServerResponse resp;
  resp.result = {session_key, ch.pad_n, ch.pad_m};
  resp.hello_msg = encode_server_hello(sh);
  resp.hello = std::move(sh);
  return resp;
}

inline HandshakeResult client_finish(const ClientHandshake& state,
                                     const Bytes& server_hello_msg) {
  ServerHello sh = decode_server_hello(server_hello_msg);
  if (sh.chosen_kem_id != state.offered_first_kem)
    throw AuthError("handshake_failure: server chose an unoffered KEM");

  std::shared_ptr<KemAlgorithm> kem;
  for (const auto& k : state.config.kems)
    if (k->identifier() == sh.chosen_kem_id) kem = k;
  if (!kem) throw AuthError("handshake_failure: unknown KEM id");

  Bytes shared_secret = kem->decapsulate(state.key_pair.secret_key, sh.kem_ciphertext);
  auto transcript = detail::transcript_hash(state.hello_msg, sh);
  SessionKey session_key = derive_session_key(shared_secret, transcript);
  auto expected = detail::confirm_tag(session_key, transcript);
  if (expected != sh.server_confirm)
    throw AuthError("handshake_failure: server confirmation mismatch");

  return {session_key, state.config.pad_n, state.config.pad_m};
}

}  // namespace qpp
