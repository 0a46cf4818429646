#pragma once

// Permutation pad: M secret bijections over n-bit symbols, generated from a
// session key with Fisher-Yates driven by the pad keystream.

#include <cstdint>
#include <algorithm>
#include <fstream>
#include <numeric>
#include <vector>

#include "qpp/bytes.hpp"
#include "qpp/keystream.hpp"

namespace qpp {

struct PermutationGate {
  std::vector<uint16_t> mapping;  // 2^n entries, each in [0, 2^n)

  bool is_bijection() const {
    std::vector<uint16_t> sorted = mapping;
    std::sort(sorted.begin(), sorted.end());
    for (size_t i = 0; i < sorted.size(); ++i)
      if (sorted[i] != i) return false;
    return true;
  }
};

inline PermutationGate invert_gate(const PermutationGate& gate) {
  if (!gate.is_bijection()) throw ParamError("invert_gate: mapping is not a bijection");
  PermutationGate inv;
  inv.mapping.resize(gate.mapping.size());
  for (size_t x = 0; x < gate.mapping.size(); ++x)
    inv.mapping[gate.mapping[x]] = static_cast<uint16_t>(x);
  return inv;
}

class QppPad {
 public:
  QppPad(unsigned n, std::vector<PermutationGate> gates)
      : n_(n), gates_(std::move(gates)) {
    inverse_gates_.reserve(gates_.size());
    for (const auto& g : gates_) inverse_gates_.push_back(invert_gate(g));
  }

  unsigned n() const { return n_; }
  unsigned gate_count() const { return static_cast<unsigned>(gates_.size()); }
  unsigned symbol_count() const { return 1u << n_; }
  const std::vector<PermutationGate>& gates() const { return gates_; }
  const std::vector<PermutationGate>& inverse_gates() const { return inverse_gates_; }

  static void check_params(unsigned n, unsigned m) {
    if (n != 4 && n != 8) throw ParamError("pad: n must be 4 or 8");
    if (m < 1) throw ParamError("pad: M must be at least 1");
    if (n == 8 && 256 % m != 0)
      throw ParamError("pad: n=8 requires M dividing 256");
    if (n == 4 && 16 % m != 0)
      throw ParamError("pad: n=4 requires M dividing 16");
  }

 private:
  unsigned n_;
  std::vector<PermutationGate> gates_;
  std::vector<PermutationGate> inverse_gates_;
};

inline QppPad generate_pad(const SessionKey& key, unsigned n, unsigned m) {
  QppPad::check_params(n, m);
  auto ks = ks_init(derive_subkey(key, kLabelPad), {});
  unsigned size = 1u << n;
  std::vector<PermutationGate> gates;
  gates.reserve(m);
  for (unsigned g = 0; g < m; ++g) {
    PermutationGate gate;
    gate.mapping.resize(size);
    std::iota(gate.mapping.begin(), gate.mapping.end(), 0);
    for (unsigned i = size - 1; i >= 1; --i) {
      unsigned j = ks.uniform_below(i + 1);
      std::swap(gate.mapping[i], gate.mapping[j]);
    }
    gates.push_back(std::move(gate));
  }
  return QppPad(n, std::move(gates));
}

// Debug export: magic "QPPD", version 0x01, n, M (2-byte BE), then the gate
// tables; n=4 packs two entries per byte, first entry in the high nibble.
// The session key never appears in this file.
inline Bytes export_pad(const QppPad& pad) {
  Bytes out = {'Q', 'P', 'P', 'D', 0x01};
  out.push_back(static_cast<uint8_t>(pad.n()));
  put_u16be(out, static_cast<uint16_t>(pad.gate_count()));
  for (const auto& gate : pad.gates()) {
    if (pad.n() == 8) {
      for (uint16_t v : gate.mapping) out.push_back(static_cast<uint8_t>(v));
    } else {
      for (size_t i = 0; i < gate.mapping.size(); i += 2)
        out.push_back(static_cast<uint8_t>(gate.mapping[i] << 4 | gate.mapping[i + 1]));
    }
  }
  return out;
}

inline QppPad import_pad(const Bytes& data) {
  ByteReader r(data);
  auto magic = r.take(4);
  if (magic != Bytes{'Q', 'P', 'P', 'D'}) throw DecodeError("pad file: bad magic");
  if (r.u8() != 0x01) throw DecodeError("pad file: unsupported version");
  unsigned n = r.u8();
  unsigned m = r.u16be();
  QppPad::check_params(n, m);
  unsigned size = 1u << n;
  std::vector<PermutationGate> gates;
  gates.reserve(m);
  for (unsigned g = 0; g < m; ++g) {
    PermutationGate gate;
    gate.mapping.reserve(size);
    if (n == 8) {
      for (unsigned i = 0; i < size; ++i) gate.mapping.push_back(r.u8());
    } else {
      for (unsigned i = 0; i < size / 2; ++i) {
        uint8_t b = r.u8();
        gate.mapping.push_back(b >> 4);
        gate.mapping.push_back(b & 0x0F);
      }
    }
    if (!gate.is_bijection()) throw DecodeError("pad file: gate is not a bijection");
    gates.push_back(std::move(gate));
  }
  r.expect_end();
  return QppPad(n, std::move(gates));
}

}  // namespace qpp
