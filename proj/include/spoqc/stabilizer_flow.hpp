#pragma once

// Aaronson-Gottesman tableau simulation with symbolic phase bits.
//
// Random measurement outcomes are fresh GF(2) symbols instead of sampled
// bits, and row phases are affine forms over those symbols. A parity of
// measurement records is then provably deterministic iff its symbol part
// cancels, which is exactly the detector-determinism check the circuit
// validator needs. Used for validation only; shot sampling lives in the
// Pauli-frame engine.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace spoqc {

// Affine form over GF(2): bit 0 is the constant term, bit 1+k is symbol k.
class SymbolicBits {
 public:
  SymbolicBits() = default;
  explicit SymbolicBits(int width_bits)
      : words_((static_cast<std::size_t>(width_bits) + 63) / 64, 0) {}

  void flip_constant() { words_[0] ^= 1ULL; }
  void flip(int bit) {
    words_[static_cast<std::size_t>(bit) / 64] ^= 1ULL << (bit % 64);
  }
  bool constant() const { return words_.empty() ? false : (words_[0] & 1ULL); }

  bool has_symbols() const {
    if (words_.empty()) return false;
    if (words_[0] & ~1ULL) return true;
    for (std::size_t w = 1; w < words_.size(); ++w)
      if (words_[w]) return true;
    return false;
  }

  void operator^=(const SymbolicBits& other) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  }

  void clear() {
    for (auto& w : words_) w = 0;
  }

  bool operator==(const SymbolicBits&) const = default;

 private:
  std::vector<std::uint64_t> words_;
};

class StabilizerFlow {
 public:
  StabilizerFlow(int qubits, int max_symbols)
      : n_(qubits),
        phase_width_(1 + max_symbols),
        x_((2 * static_cast<std::size_t>(qubits) + 1),
           std::vector<std::uint8_t>(static_cast<std::size_t>(qubits), 0)),
        z_(x_),
        r_(2 * static_cast<std::size_t>(qubits) + 1, SymbolicBits(phase_width_)) {
    // Destabilizers X_q, stabilizers Z_q: the all-zeros state.
    for (int q = 0; q < qubits; ++q) {
      x_[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] = 1;
      z_[static_cast<std::size_t>(qubits + q)][static_cast<std::size_t>(q)] = 1;
    }
  }

  int symbol_count() const { return symbols_; }

  void h(int q) {
    for (std::size_t i = 0; i < rows(); ++i) {
      auto& x = x_[i][static_cast<std::size_t>(q)];
      auto& z = z_[i][static_cast<std::size_t>(q)];
      if (x && z) r_[i].flip_constant();
      std::swap(x, z);
    }
  }

  void s(int q) {
    for (std::size_t i = 0; i < rows(); ++i) {
      auto& x = x_[i][static_cast<std::size_t>(q)];
      auto& z = z_[i][static_cast<std::size_t>(q)];
      if (x && z) r_[i].flip_constant();
      z ^= x;
    }
  }

  // (Y + Z)/sqrt(2): X -> -X, Y <-> Z.
  void hyz(int q) {
    for (std::size_t i = 0; i < rows(); ++i) {
      auto& x = x_[i][static_cast<std::size_t>(q)];
      auto& z = z_[i][static_cast<std::size_t>(q)];
      if (x && !z) r_[i].flip_constant();
      x ^= z;
    }
  }

  void cz(int a, int b) {
    for (std::size_t i = 0; i < rows(); ++i) {
      const auto xa = x_[i][static_cast<std::size_t>(a)];
      const auto xb = x_[i][static_cast<std::size_t>(b)];
      const auto za = z_[i][static_cast<std::size_t>(a)];
      const auto zb = z_[i][static_cast<std::size_t>(b)];
      if (xa && xb && (za ^ zb)) r_[i].flip_constant();
      z_[i][static_cast<std::size_t>(a)] ^= xb;
      z_[i][static_cast<std::size_t>(b)] ^= xa;
    }
  }

  // Pauli X conditioned on a symbolic bit (used by reset).
  void x_conditional(int q, const SymbolicBits& condition) {
    for (std::size_t i = 0; i < rows(); ++i)
      if (z_[i][static_cast<std::size_t>(q)]) r_[i] ^= condition;
  }

  SymbolicBits measure_z(int q) {
    const std::size_t qi = static_cast<std::size_t>(q);
    int wild = -1;
    for (int i = n_; i < 2 * n_; ++i)
      if (x_[static_cast<std::size_t>(i)][qi]) {
        wild = i;
        break;
      }

    if (wild >= 0) {
      // Random outcome: introduce a fresh symbol.
      for (int i = 0; i < 2 * n_; ++i)
        if (i != wild && x_[static_cast<std::size_t>(i)][qi]) rowsum(i, wild);
      const std::size_t w = static_cast<std::size_t>(wild);
      x_[w - static_cast<std::size_t>(n_)] = x_[w];
      z_[w - static_cast<std::size_t>(n_)] = z_[w];
      r_[w - static_cast<std::size_t>(n_)] = r_[w];
      for (int qq = 0; qq < n_; ++qq) {
        x_[w][static_cast<std::size_t>(qq)] = 0;
        z_[w][static_cast<std::size_t>(qq)] = 0;
      }
      z_[w][qi] = 1;
      r_[w].clear();
      if (symbols_ + 1 >= phase_width_)
        throw std::logic_error("StabilizerFlow: symbol budget exceeded");
      r_[w].flip(1 + symbols_++);
      return r_[w];
    }

    // Deterministic outcome: accumulate into the scratch row.
    const std::size_t scratch = rows() - 1;
    for (int qq = 0; qq < n_; ++qq) {
      x_[scratch][static_cast<std::size_t>(qq)] = 0;
      z_[scratch][static_cast<std::size_t>(qq)] = 0;
    }
    r_[scratch].clear();
    for (int i = 0; i < n_; ++i)
      if (x_[static_cast<std::size_t>(i)][qi])
        rowsum(static_cast<int>(scratch), i + n_);
    return r_[scratch];
  }

  void reset_z(int q) {
    const SymbolicBits outcome = measure_z(q);
    if (outcome.has_symbols() || outcome.constant()) x_conditional(q, outcome);
  }

 private:
  std::size_t rows() const { return 2 * static_cast<std::size_t>(n_) + 1; }

  // Phase exponent contribution of multiplying two single-qubit Paulis.
  static int g(int x1, int z1, int x2, int z2) {
    if (!x1 && !z1) return 0;
    if (x1 && z1) return z2 - x2;
    if (x1) return z2 * (2 * x2 - 1);
    return x2 * (1 - 2 * z2);
  }

  // Row h <- row h * row i.
  void rowsum(int h, int i) {
    const std::size_t hs = static_cast<std::size_t>(h);
    const std::size_t is = static_cast<std::size_t>(i);
    int exponent = 0;
    for (int q = 0; q < n_; ++q) {
      const std::size_t qs = static_cast<std::size_t>(q);
      exponent += g(x_[is][qs], z_[is][qs], x_[hs][qs], z_[hs][qs]);
      x_[hs][qs] ^= x_[is][qs];
      z_[hs][qs] ^= z_[is][qs];
    }
    exponent %= 4;
    if (exponent < 0) exponent += 4;
    if (exponent == 2) r_[hs].flip_constant();
    // exponent 1 or 3 cannot occur for commuting row products.
    r_[hs] ^= r_[is];
  }

  int n_;
  int phase_width_;
  int symbols_ = 0;
  std::vector<std::vector<std::uint8_t>> x_, z_;
  std::vector<SymbolicBits> r_;
};

}  // namespace spoqc
