#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "spoqc/rng.hpp"

namespace spoqc {

inline constexpr double kProbabilityTolerance = 1e-12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char pauli_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

// Index of the product of two Paulis, phase ignored.
inline int pauli_product_index(int i, int j) {
  static constexpr int table[4][4] = {
      {0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  return table[i][j];
}

// Single-qubit Pauli channel {p_I, p_X, p_Y, p_Z}.
struct PauliChannel1 {
  double p_i = 1.0, p_x = 0.0, p_y = 0.0, p_z = 0.0;

  void validate() const {
    for (double p : {p_i, p_x, p_y, p_z})
      if (!(p >= 0.0))
        throw std::domain_error("PauliChannel1: negative probability");
    if (std::abs(p_i + p_x + p_y + p_z - 1.0) > kProbabilityTolerance)
      throw std::domain_error("PauliChannel1: probabilities do not sum to 1");
  }

  bool is_identity() const { return p_x == 0.0 && p_y == 0.0 && p_z == 0.0; }

  std::array<double, 4> as_array() const { return {p_i, p_x, p_y, p_z}; }

  Pauli sample(Rng& rng) const {
    const double u = rng.uniform();
    if (u < p_x) return Pauli::X;
    if (u < p_x + p_y) return Pauli::Y;
    if (u < p_x + p_y + p_z) return Pauli::Z;
    return Pauli::I;
  }
};

// Composition (convolution over the Pauli group); Pauli channels commute.
inline PauliChannel1 compose(const PauliChannel1& a, const PauliChannel1& b) {
  const auto pa = a.as_array();
  const auto pb = b.as_array();
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[pauli_product_index(i, j)] += pa[i] * pb[j];
  return {out[0], out[1], out[2], out[3]};
}

// Two-qubit Pauli channel as 16 probabilities indexed by 4*a + b.
struct PauliChannel2 {
  std::array<double, 16> probs{};

  PauliChannel2() { probs[0] = 1.0; }

  static int index(Pauli a, Pauli b) {
    return 4 * static_cast<int>(a) + static_cast<int>(b);
  }

  double& at(Pauli a, Pauli b) { return probs[index(a, b)]; }
  double at(Pauli a, Pauli b) const { return probs[index(a, b)]; }

  void validate() const {
    double sum = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0))
        throw std::domain_error("PauliChannel2: negative probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance)
      throw std::domain_error("PauliChannel2: probabilities do not sum to 1");
  }

  std::pair<Pauli, Pauli> sample(Rng& rng) const {
    double u = rng.uniform();
    for (int i = 1; i < 16; ++i) {
      u -= probs[i];
      if (u < 0.0)
        return {static_cast<Pauli>(i / 4), static_cast<Pauli>(i % 4)};
    }
    return {Pauli::I, Pauli::I};
  }
};

inline PauliChannel2 compose(const PauliChannel2& a, const PauliChannel2& b) {
  PauliChannel2 out;
  out.probs.fill(0.0);
  for (int i = 0; i < 16; ++i) {
    if (a.probs[i] == 0.0) continue;
    for (int j = 0; j < 16; ++j) {
      if (b.probs[j] == 0.0) continue;
      const int qa = pauli_product_index(i / 4, j / 4);
      const int qb = pauli_product_index(i % 4, j % 4);
      out.probs[4 * qa + qb] += a.probs[i] * b.probs[j];
    }
  }
  return out;
}

inline std::string pauli2_label(int index) {
  std::string s;
  s += pauli_char(static_cast<Pauli>(index / 4));
  s += pauli_char(static_cast<Pauli>(index % 4));
  return s;
}

}  // namespace spoqc
