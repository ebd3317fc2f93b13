#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "spoqc/pauli.hpp"

namespace spoqc {

// Full two-qubit dephasing applied on gate failure or abort:
// C_Za C_Zb expands to the uniform distribution over {II, ZI, IZ, ZZ}.
inline PauliChannel2 failure_channel() {
  PauliChannel2 c;
  c.probs.fill(0.0);
  c.at(Pauli::I, Pauli::I) = 0.25;
  c.at(Pauli::Z, Pauli::I) = 0.25;
  c.at(Pauli::I, Pauli::Z) = 0.25;
  c.at(Pauli::Z, Pauli::Z) = 0.25;
  return c;
}

// Post-CZ error channel for partially distinguishable photons, in the
// full-dephasing approximation: (1-D) rho + D * C_Za C_Zb(rho). The exact
// non-Pauli channel lives in the optics oracle only.
inline PauliChannel2 success_channel(double distinguishability) {
  if (!(distinguishability >= 0.0 && distinguishability <= 1.0))
    throw std::domain_error("success_channel: D outside [0, 1]");
  PauliChannel2 c;
  c.probs.fill(0.0);
  c.at(Pauli::I, Pauli::I) = 1.0 - 0.75 * distinguishability;
  c.at(Pauli::Z, Pauli::I) = 0.25 * distinguishability;
  c.at(Pauli::I, Pauli::Z) = 0.25 * distinguishability;
  c.at(Pauli::Z, Pauli::Z) = 0.25 * distinguishability;
  return c;
}

// Pauli form of the thermal Lindblad channel in the high-temperature limit
// (gamma_up == gamma_down == gamma), parameterized by elapsed time over the
// two timescales: t/T2 = t*(gamma + gamma*), t/T1 = 2*t*gamma.
//
// p_X = p_Y = (1 - e^{-2 t gamma}) / 4
// p_Z = (1 - e^{-t (gamma + gamma*)}) / 2 - (1 - e^{-2 t gamma}) / 4
inline PauliChannel1 decoherence_channel(double t_over_t2, double t_over_t1 = 0.0) {
  if (!(t_over_t2 >= 0.0) || !(t_over_t1 >= 0.0))
    throw std::domain_error("decoherence_channel: negative time ratio");
  if (t_over_t2 < t_over_t1 / 2.0)
    throw std::domain_error(
        "decoherence_channel: T2 > 2*T1 implies a negative pure-dephasing rate");
  const double pxy = (1.0 - std::exp(-t_over_t1)) / 4.0;
  const double pz = (1.0 - std::exp(-t_over_t2)) / 2.0 - pxy;
  PauliChannel1 c{1.0 - 2.0 * pxy - pz, pxy, pxy, pz};
  c.validate();
  return c;
}

struct ThermalParams {
  double gamma_0 = 0.0;     // zero-temperature relaxation rate
  double gamma_star = 0.0;  // pure dephasing rate
  double n_th = 0.0;        // thermal occupation of the bath

  void validate() const {
    if (!(gamma_0 >= 0.0) || !(gamma_star >= 0.0) || !(n_th >= 0.0))
      throw std::domain_error("ThermalParams: rates must be nonnegative");
  }
  double gamma_up() const { return gamma_0 * n_th; }
  double gamma_down() const { return gamma_0 * (n_th + 1.0); }
};

// Single-qubit channel as a 4x4 superoperator acting on vec(rho),
// column-major: vec = (rho_00, rho_10, rho_01, rho_11). Basis: |0> = up.
using Superoperator1 = Eigen::Matrix4cd;

inline Eigen::Matrix2cd apply_superoperator(const Superoperator1& s,
                                            const Eigen::Matrix2cd& rho) {
  Eigen::Vector4cd v;
  v << rho(0, 0), rho(1, 0), rho(0, 1), rho(1, 1);
  const Eigen::Vector4cd w = s * v;
  Eigen::Matrix2cd out;
  out << w(0), w(2), w(1), w(3);
  return out;
}

inline Superoperator1 kraus_term(const Eigen::Matrix2cd& k) {
  return Eigen::kroneckerProduct(k.conjugate(), k);
}

// Closed-form solution of the thermal Lindblad master equation
//   d rho/dt = g_down D(sigma-) + g_up D(sigma+) + (gamma*/2) D(sigma_z)
// for a duration t. Populations relax toward the thermal mixture at total
// rate G = g_up + g_down; coherences decay at rate G/2 + gamma*. Not a
// Pauli channel unless g_up == g_down.
inline Superoperator1 thermal_channel(double t, const ThermalParams& params) {
  params.validate();
  if (!(t >= 0.0)) throw std::domain_error("thermal_channel: negative time");

  const double g_up = params.gamma_up();
  const double g_down = params.gamma_down();
  const double total = g_up + g_down;

  double keep_up, keep_down, up_to_down, down_to_up;
  if (total == 0.0) {
    keep_up = keep_down = 1.0;
    up_to_down = down_to_up = 0.0;
  } else {
    const double decay = std::exp(-t * total);
    keep_up = (g_up + g_down * decay) / total;
    keep_down = (g_down + g_up * decay) / total;
    up_to_down = g_down * (1.0 - decay) / total;
    down_to_up = g_up * (1.0 - decay) / total;
  }
  const double coherence = std::exp(-t * (total / 2.0 + params.gamma_star));

  Superoperator1 s = Superoperator1::Zero();
  // vec index: 0 = rho_00 (up,up), 1 = rho_10, 2 = rho_01, 3 = rho_11.
  s(0, 0) = keep_up;
  s(3, 3) = keep_down;
  s(3, 0) = up_to_down;
  s(0, 3) = down_to_up;
  s(1, 1) = coherence;
  s(2, 2) = coherence;
  return s;
}

inline Superoperator1 pauli_channel_superoperator(const PauliChannel1& c) {
  const Eigen::Matrix2cd i2 = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << std::complex<double>(0, 0), std::complex<double>(0, -1),
      std::complex<double>(0, 1), std::complex<double>(0, 0);
  z << 1, 0, 0, -1;
  return c.p_i * kraus_term(i2) + c.p_x * kraus_term(x) +
         c.p_y * kraus_term(y) + c.p_z * kraus_term(z);
}

}  // namespace spoqc
