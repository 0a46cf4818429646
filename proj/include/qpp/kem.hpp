#pragma once

// Pluggable key encapsulation interface. Production PQC algorithms plug in
// behind KemAlgorithm; the only implementation shipped here is an insecure
// mock for tests and demos.

#include <cstdint>
#include <memory>
#include <utility>

#include "qpp/bytes.hpp"
#include "qpp/sha256.hpp"

namespace qpp {

struct KemKeyPair {
  Bytes public_key;
  Bytes secret_key;
};

struct KemEncapsulation {
  Bytes ciphertext;
  Bytes shared_secret;
};

class KemAlgorithm {
 public:
  virtual ~KemAlgorithm() = default;
  virtual uint16_t identifier() const = 0;
  virtual KemKeyPair keygen(const std::array<uint8_t, 32>& seed) const = 0;
  virtual KemEncapsulation encapsulate(const Bytes& public_key,
                                       const std::array<uint8_t, 32>& seed) const = 0;
  virtual Bytes decapsulate(const Bytes& secret_key, const Bytes& ciphertext) const = 0;
};

inline constexpr uint16_t kMockKemId = 0x7F01;

// INSECURE mock KEM: the shared secret is computable from public values
// alone (ss = SHA-256(pk || ct)). It exists so the handshake and tunnel can
// be exercised without a real PQC library, and refuses to run unless the
// caller explicitly acknowledges that.
class MockKem : public KemAlgorithm {
 public:
  struct InsecureAck {
    bool acknowledged = false;
  };

  explicit MockKem(InsecureAck ack) {
    if (!ack.acknowledged)
      throw ParamError(
          "MockKem is insecure by construction; pass an explicit "
          "acknowledgement (--insecure-demo / QPP_DEMO_ACK=1) to use it");
  }

  uint16_t identifier() const override { return kMockKemId; }

  KemKeyPair keygen(const std::array<uint8_t, 32>& seed) const override {
    KemKeyPair kp;
    kp.secret_key.assign(seed.begin(), seed.end());
    auto pk = Sha256::hash(kp.secret_key);
    kp.public_key.assign(pk.begin(), pk.end());
    return kp;
  }

  KemEncapsulation encapsulate(const Bytes& public_key,
                               const std::array<uint8_t, 32>& seed) const override {
    KemEncapsulation enc;
    enc.ciphertext.assign(seed.begin(), seed.end());
    Sha256 h;
    h.update(public_key);
    h.update(enc.ciphertext);
    auto ss = h.finish();
    enc.shared_secret.assign(ss.begin(), ss.end());
    return enc;
  }

  Bytes decapsulate(const Bytes& secret_key, const Bytes& ciphertext) const override {
    auto pk = Sha256::hash(secret_key);
    Sha256 h;
    h.update(pk);
    h.update(ciphertext);
    auto ss = h.finish();
    return Bytes(ss.begin(), ss.end());
  }
};

}  // namespace qpp
