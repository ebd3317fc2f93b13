#pragma once

// First-principles Fock simulation of the 4-mode RUS interferometer.
//
// Photonic modes: 4 detector paths x 2 internal labels, plus a loss partner
// for each, 16 modes total with at most two photons. Every conditional spin
// map of the gate is diagonal in the two-spin computational basis, so each
// detection pattern is fully described by the Gram matrix of the four
// photonic vectors conditioned on the spin basis state: the conditional
// channel is the Schur product rho -> G o rho.

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spoqc/pauli.hpp"

namespace spoqc::optics {

using Complex = std::complex<double>;

inline constexpr int kPathCount = 4;
inline constexpr int kModeCount = 16;  // (path, label) detected + loss partners

inline int detected_mode(int path, int label) { return 2 * path + label; }
inline int loss_mode(int path, int label) { return 8 + 2 * path + label; }

// Interferometer of the RUS gate.
inline Eigen::Matrix4cd rus_unitary() {
  const Complex i(0.0, 1.0);
  Eigen::Matrix4cd u;
  u << 1, 1, 1, 1,
       1, 1, -1, -1,
       1, -1, -i, i,
       1, -1, i, -i;
  return 0.5 * u;
}

// Occupation basis: multisets of at most two modes. Vacuum is (-1,-1),
// a single photon in m is (m,-1), two photons are (m1,m2) with m1 <= m2.
struct PhotonConfig {
  std::int8_t first = -1;
  std::int8_t second = -1;

  int photon_count() const { return (first >= 0) + (second >= 0); }
  int occupation(int mode) const {
    return (first == mode) + (second == mode);
  }
  auto operator<=>(const PhotonConfig&) const = default;
};

class ConfigBasis {
 public:
  ConfigBasis() {
    configs_.push_back({-1, -1});
    for (int m = 0; m < kModeCount; ++m)
      configs_.push_back({static_cast<std::int8_t>(m), -1});
    for (int m1 = 0; m1 < kModeCount; ++m1)
      for (int m2 = m1; m2 < kModeCount; ++m2)
        configs_.push_back({static_cast<std::int8_t>(m1), static_cast<std::int8_t>(m2)});
    for (int c = 0; c < size(); ++c) index_[configs_[static_cast<std::size_t>(c)]] = c;
  }

  int size() const { return static_cast<int>(configs_.size()); }
  const PhotonConfig& config(int index) const {
    return configs_[static_cast<std::size_t>(index)];
  }
  int index_of(const PhotonConfig& c) const { return index_.at(c); }

  int with_photon(int config_index, int mode, double* bose_factor) const {
    const PhotonConfig& c = config(config_index);
    if (c.photon_count() == 2)
      throw std::invalid_argument("ConfigBasis: more than two photons");
    PhotonConfig out;
    if (c.photon_count() == 0) {
      out = {static_cast<std::int8_t>(mode), -1};
      *bose_factor = 1.0;
    } else {
      const int other = c.first;
      out.first = static_cast<std::int8_t>(std::min(other, mode));
      out.second = static_cast<std::int8_t>(std::max(other, mode));
      *bose_factor = (other == mode) ? std::sqrt(2.0) : 1.0;
    }
    return index_of(out);
  }

  static const ConfigBasis& instance() {
    static const ConfigBasis basis;
    return basis;
  }

 private:
  std::vector<PhotonConfig> configs_;
  std::map<PhotonConfig, int> index_;
};

using ModeTransform = Eigen::Matrix<Complex, kModeCount, kModeCount>;

// Applies a linear mode transform a_m^dag -> sum_q A_{q,m} a_q^dag to a
// vector over the occupation basis.
inline Eigen::VectorXcd apply_mode_transform(const ModeTransform& a,
                                             const Eigen::VectorXcd& in) {
  const auto& basis = ConfigBasis::instance();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(in.size());
  for (int c = 0; c < basis.size(); ++c) {
    const Complex amp = in(c);
    if (amp == Complex(0.0, 0.0)) continue;
    const PhotonConfig& cfg = basis.config(c);
    if (cfg.photon_count() == 0) {
      out(c) += amp;
      continue;
    }
    if (cfg.photon_count() == 1) {
      const int m = cfg.first;
      for (int q = 0; q < kModeCount; ++q) {
        if (a(q, m) == Complex(0.0, 0.0)) continue;
        out(basis.index_of({static_cast<std::int8_t>(q), -1})) += amp * a(q, m);
      }
      continue;
    }
    const int m1 = cfg.first, m2 = cfg.second;
    const double inv_norm = (m1 == m2) ? 1.0 / std::sqrt(2.0) : 1.0;
    for (int q1 = 0; q1 < kModeCount; ++q1) {
      const Complex a11 = a(q1, m1), a12 = a(q1, m2);
      for (int q2 = q1; q2 < kModeCount; ++q2) {
        Complex coef;
        if (q1 == q2) {
          coef = std::sqrt(2.0) * a11 * a12;
        } else {
          coef = a11 * a(q2, m2) + a(q2, m1) * a12;
        }
        if (coef == Complex(0.0, 0.0)) continue;
        out(basis.index_of({static_cast<std::int8_t>(q1),
                            static_cast<std::int8_t>(q2)})) +=
            amp * inv_norm * coef;
      }
    }
  }
  return out;
}

enum class Emitter : std::uint8_t { A, B };

// Joint pure state of the two spins and the photonic modes.
class JointState {
 public:
  JointState() : amps_(Eigen::VectorXcd::Zero(4 * ConfigBasis::instance().size())) {}

  // Photon vacuum with the given two-spin amplitudes (basis 00,01,10,11).
  static JointState from_spins(const Eigen::Vector4cd& spin_amplitudes) {
    JointState s;
    for (int u = 0; u < 4; ++u) s.amp(u, 0) = spin_amplitudes(u);
    s.validate();
    return s;
  }

  Complex& amp(int spin, int config) {
    return amps_(spin * ConfigBasis::instance().size() + config);
  }
  Complex amp(int spin, int config) const {
    return amps_(spin * ConfigBasis::instance().size() + config);
  }

  Eigen::VectorXcd spin_row(int spin) const {
    const int n = ConfigBasis::instance().size();
    return amps_.segment(spin * n, n);
  }
  void set_spin_row(int spin, const Eigen::VectorXcd& row) {
    const int n = ConfigBasis::instance().size();
    amps_.segment(spin * n, n) = row;
  }

  double norm() const { return amps_.norm(); }

  void validate() const {
    if (std::abs(norm() - 1.0) > 1e-12)
      throw std::invalid_argument("JointState: not normalized");
  }

  // Reduced two-spin density matrix (photons traced out).
  Eigen::Matrix4cd spin_density() const {
    const int n = ConfigBasis::instance().size();
    Eigen::Matrix4cd rho;
    for (int u = 0; u < 4; ++u)
      for (int v = 0; v < 4; ++v)
        // rho_uv = sum_c amp(u,c) * conj(amp(v,c)); Eigen dot conjugates
        // its left argument.
        rho(u, v) = amps_.segment(v * n, n).dot(amps_.segment(u * n, n));
    return rho;
  }

 private:
  Eigen::VectorXcd amps_;
};

// Spin-entangled photon emission: spin basis state 0/1 places a photon in
// the first/second rail of the emitter's dual-rail pair. `internal_label`
// is the photon's internal wavefunction in the {reference, orthogonal}
// label basis; photon a is the reference (1, 0).
inline void emit(JointState& state, Emitter emitter,
                 const Eigen::Vector2cd& internal_label = Eigen::Vector2cd(1.0, 0.0)) {
  if (std::abs(internal_label.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("emit: internal label state not normalized");
  const auto& basis = ConfigBasis::instance();
  const int base_path = (emitter == Emitter::A) ? 0 : 2;

  // Precondition: the emitter's dual-rail pair is empty in every branch.
  for (int u = 0; u < 4; ++u)
    for (int c = 0; c < basis.size(); ++c) {
      if (state.amp(u, c) == Complex(0.0, 0.0)) continue;
      for (int label = 0; label < 2; ++label)
        for (int path = base_path; path < base_path + 2; ++path)
          if (basis.config(c).occupation(detected_mode(path, label)) > 0 ||
              basis.config(c).occupation(loss_mode(path, label)) > 0)
            throw std::invalid_argument("emit: dual-rail pair already occupied");
    }

  JointState out;
  for (int u = 0; u < 4; ++u) {
    const int spin_bit = (emitter == Emitter::A) ? (u >> 1) : (u & 1);
    const int path = base_path + spin_bit;
    for (int c = 0; c < basis.size(); ++c) {
      const Complex amp = state.amp(u, c);
      if (amp == Complex(0.0, 0.0)) continue;
      for (int label = 0; label < 2; ++label) {
        if (internal_label(label) == Complex(0.0, 0.0)) continue;
        double bose = 1.0;
        const int target = basis.with_photon(c, detected_mode(path, label), &bose);
        out.amp(u, target) += amp * internal_label(label) * bose;
      }
    }
  }
  state = out;
}

// Per-path loss beamsplitter with transmission eta, both internal labels.
inline ModeTransform loss_transform(double eta_a, double eta_b) {
  ModeTransform a = ModeTransform::Identity();
  for (int path = 0; path < kPathCount; ++path) {
    const double eta = (path < 2) ? eta_a : eta_b;
    const double t = std::sqrt(eta), r = std::sqrt(1.0 - eta);
    for (int label = 0; label < 2; ++label) {
      const int d = detected_mode(path, label), l = loss_mode(path, label);
      a(d, d) = t;
      a(l, d) = r;
      a(d, l) = -r;
      a(l, l) = t;
    }
  }
  return a;
}

inline ModeTransform interferometer_transform(const Eigen::Matrix4cd& u) {
  ModeTransform a = ModeTransform::Zero();
  for (int p = 0; p < kPathCount; ++p)
    for (int q = 0; q < kPathCount; ++q)
      for (int label = 0; label < 2; ++label)
        a(detected_mode(q, label), detected_mode(p, label)) = u(q, p);
  for (int m = 8; m < kModeCount; ++m) a(m, m) = 1.0;
  return a;
}

inline void apply_loss(JointState& state, double eta_a, double eta_b) {
  for (double eta : {eta_a, eta_b})
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::domain_error("apply_loss: transmission outside [0, 1]");
  const auto t = loss_transform(eta_a, eta_b);
  for (int u = 0; u < 4; ++u)
    state.set_spin_row(u, apply_mode_transform(t, state.spin_row(u)));
}

inline void apply_interferometer(JointState& state) {
  const auto t = interferometer_transform(rus_unitary());
  for (int u = 0; u < 4; ++u)
    state.set_spin_row(u, apply_mode_transform(t, state.spin_row(u)));
}

// Detection pattern: photon counts per detector path; `loss` lumps every
// case with fewer than two detected photons (the F class).
struct DetectionPattern {
  std::array<std::int8_t, 4> counts{};
  bool loss = false;

  static DetectionPattern pair(int k, int l) {
    DetectionPattern p;
    ++p.counts[static_cast<std::size_t>(k)];
    ++p.counts[static_cast<std::size_t>(l)];
    return p;
  }
  static DetectionPattern loss_class() {
    DetectionPattern p;
    p.loss = true;
    return p;
  }

  int total() const {
    int t = 0;
    for (auto c : counts) t += c;
    return t;
  }

  auto operator<=>(const DetectionPattern&) const = default;

  std::string str() const {
    if (loss) return "F";
    std::vector<int> hits;
    for (int p = 0; p < 4; ++p)
      for (int c = 0; c < counts[static_cast<std::size_t>(p)]; ++c) hits.push_back(p);
    return "(" + std::to_string(hits[0]) + "," + std::to_string(hits[1]) + ")";
  }
};

// Conditional spin map of one detection pattern. All Kraus operators are
// diagonal, so the (unnormalized) channel is rho -> gram o rho (Schur
// product) and gram(u,u) is the pattern probability given spin input |u>.
struct ConditionalChannel {
  double probability = 0.0;  // for the maximally mixed spin input
  Eigen::Matrix4cd gram = Eigen::Matrix4cd::Zero();

  Eigen::Matrix4cd normalized_mask() const {
    const double p = probability;
    if (p <= 0.0) throw std::domain_error("ConditionalChannel: zero probability");
    return gram / p;
  }

  // Normalized channel action.
  Eigen::Matrix4cd apply(const Eigen::Matrix4cd& rho) const {
    return normalized_mask().cwiseProduct(rho);
  }
};

// Diagonal two-qubit unitaries used in corrections and comparisons.
inline Eigen::Vector4cd diag_identity() { return Eigen::Vector4cd::Ones(); }
inline Eigen::Vector4cd diag_cz() { return Eigen::Vector4cd(1, 1, 1, -1); }
inline Eigen::Vector4cd diag_za() { return Eigen::Vector4cd(1, 1, -1, -1); }
inline Eigen::Vector4cd diag_zb() { return Eigen::Vector4cd(1, -1, 1, -1); }
inline Eigen::Vector4cd diag_s_a_s_b_dag() {
  const Complex i(0, 1);
  return Eigen::Vector4cd(Complex(1), -i, i, Complex(1));
}
inline Eigen::Vector4cd diag_s_a_dag_s_b() {
  return diag_s_a_s_b_dag().conjugate();
}

// Schur mask of the channel rho -> U rho U^dag for diagonal U.
inline Eigen::Matrix4cd unitary_mask(const Eigen::Vector4cd& diag) {
  return diag * diag.adjoint();
}

// Mask of C_Za C_Zb: kills every off-diagonal element.
inline Eigen::Matrix4cd full_dephasing_mask() {
  return Eigen::Matrix4cd::Identity();
}

// Conjugates a conditional channel by a diagonal correction unitary:
// rho -> C (G o rho) C^dag == (C G C^dag-mask) o rho.
inline Eigen::Matrix4cd corrected_mask(const Eigen::Matrix4cd& gram,
                                       const Eigen::Vector4cd& correction) {
  return gram.cwiseProduct(correction * correction.adjoint());
}

struct OracleResult {
  std::map<DetectionPattern, ConditionalChannel> patterns;
  // Subdivision of the loss class, for the which-path erasure checks.
  ConditionalChannel one_photon_lost;
  ConditionalChannel both_photons_lost;
};

// Builds the full gate map: emission from each spin basis state, loss,
// interferometer, photon-number-resolving detection.
inline OracleResult detection_distribution(double eta_a, double eta_b,
                                           double distinguishability = 0.0) {
  for (double eta : {eta_a, eta_b})
    if (!(eta >= 0.0 && eta <= 1.0))
      throw std::domain_error("detection_distribution: transmission outside [0, 1]");
  if (!(distinguishability >= 0.0 && distinguishability <= 1.0))
    throw std::domain_error("detection_distribution: D outside [0, 1]");

  const auto& basis = ConfigBasis::instance();
  const Eigen::Vector2cd label_a(1.0, 0.0);
  const Eigen::Vector2cd label_b(std::sqrt(1.0 - distinguishability),
                                 std::sqrt(distinguishability));

  // Photonic vector conditioned on each spin basis state.
  std::array<Eigen::VectorXcd, 4> phi;
  for (int u = 0; u < 4; ++u) {
    Eigen::Vector4cd spin = Eigen::Vector4cd::Zero();
    spin(u) = 1.0;
    JointState s = JointState::from_spins(spin);
    emit(s, Emitter::A, label_a);
    emit(s, Emitter::B, label_b);
    apply_loss(s, eta_a, eta_b);
    apply_interferometer(s);
    phi[static_cast<std::size_t>(u)] = s.spin_row(u);
  }

  OracleResult result;
  for (int c = 0; c < basis.size(); ++c) {
    const PhotonConfig& cfg = basis.config(c);
    std::array<std::int8_t, 4> counts{};
    int detected = 0;
    for (int path = 0; path < kPathCount; ++path) {
      int n = 0;
      for (int label = 0; label < 2; ++label)
        n += cfg.occupation(detected_mode(path, label));
      counts[static_cast<std::size_t>(path)] = static_cast<std::int8_t>(n);
      detected += n;
    }
    if (cfg.photon_count() != 2) continue;  // only 2-photon sectors are populated

    DetectionPattern pattern;
    if (detected < 2) {
      pattern = DetectionPattern::loss_class();
    } else {
      pattern.counts = counts;
    }

    auto accumulate = [&](ConditionalChannel& channel) {
      for (int u = 0; u < 4; ++u)
        for (int v = 0; v < 4; ++v)
          channel.gram(u, v) += phi[static_cast<std::size_t>(u)](c) *
                                std::conj(phi[static_cast<std::size_t>(v)](c));
    };
    accumulate(result.patterns[pattern]);
    if (detected < 2)
      accumulate(detected == 1 ? result.one_photon_lost : result.both_photons_lost);
  }

  for (auto& [pattern, channel] : result.patterns)
    channel.probability = channel.gram.real().trace() / 4.0;
  result.one_photon_lost.probability = result.one_photon_lost.gram.real().trace() / 4.0;
  result.both_photons_lost.probability = result.both_photons_lost.gram.real().trace() / 4.0;
  return result;
}

// --- Table 1 verification ---------------------------------------------

enum class SpinGate : std::uint8_t { CZ, Identity, Dephasing };

struct Table1Row {
  DetectionPattern pattern;
  double expected_probability;
  double measured_probability;
  std::string correction;
  SpinGate gate;
  double probability_deviation;
  double channel_deviation;  // after correction, against the target gate
};

struct Table1Report {
  std::vector<Table1Row> rows;
  double max_deviation = 0.0;
};

// Checks every Table 1 cell against the oracle: detection probabilities,
// corrections, and the resulting spin gates as channel identities.
inline Table1Report verify_table1(double eta_a, double eta_b) {
  const auto result = detection_distribution(eta_a, eta_b, 0.0);
  const double t = eta_a * eta_b;

  struct Cell {
    DetectionPattern pattern;
    double probability;
    Eigen::Vector4cd correction;
    std::string correction_name;
    SpinGate gate;
  };
  std::vector<Cell> cells;
  for (auto [k, l] : {std::pair{0, 2}, {1, 3}})
    cells.push_back({DetectionPattern::pair(k, l), t / 8.0, diag_s_a_s_b_dag(),
                     "Sa Sb+", SpinGate::CZ});
  for (auto [k, l] : {std::pair{0, 3}, {1, 2}})
    cells.push_back({DetectionPattern::pair(k, l), t / 8.0, diag_s_a_dag_s_b(),
                     "Sa+ Sb", SpinGate::CZ});
  for (auto [k, l] : {std::pair{0, 0}, {1, 1}})
    cells.push_back({DetectionPattern::pair(k, l), t / 8.0, diag_identity(),
                     "Id", SpinGate::Identity});
  cells.push_back({DetectionPattern::pair(0, 1), 0.0, diag_identity(), "Id",
                   SpinGate::Identity});
  for (auto [k, l] : {std::pair{2, 2}, {3, 3}})
    cells.push_back({DetectionPattern::pair(k, l), t / 8.0,
                     diag_za().cwiseProduct(diag_zb()), "Za Zb",
                     SpinGate::Identity});
  cells.push_back({DetectionPattern::pair(2, 3), 0.0,
                   diag_za().cwiseProduct(diag_zb()), "Za Zb",
                   SpinGate::Identity});
  cells.push_back({DetectionPattern::loss_class(), 1.0 - t, diag_identity(),
                   "Id", SpinGate::Dephasing});

  Table1Report report;
  for (const auto& cell : cells) {
    Table1Row row;
    row.pattern = cell.pattern;
    row.expected_probability = cell.probability;
    row.correction = cell.correction_name;
    row.gate = cell.gate;

    const auto it = result.patterns.find(cell.pattern);
    row.measured_probability = (it == result.patterns.end()) ? 0.0
                                                             : it->second.probability;
    row.probability_deviation =
        std::abs(row.measured_probability - cell.probability);

    row.channel_deviation = 0.0;
    if (it != result.patterns.end() && row.measured_probability > 1e-15) {
      const Eigen::Matrix4cd mask =
          corrected_mask(it->second.normalized_mask(), cell.correction);
      Eigen::Matrix4cd target;
      switch (cell.gate) {
        case SpinGate::CZ: target = unitary_mask(diag_cz()); break;
        case SpinGate::Identity: target = unitary_mask(diag_identity()); break;
        case SpinGate::Dephasing: target = full_dephasing_mask(); break;
      }
      row.channel_deviation = (mask - target).cwiseAbs().maxCoeff();
    }
    report.max_deviation = std::max(
        report.max_deviation,
        std::max(row.probability_deviation, row.channel_deviation));
    report.rows.push_back(row);
  }
  return report;
}

// --- Distinguishability channel ----------------------------------------

// Schur mask of the exact partially-distinguishable success channel from
// the gate analysis: C_D(rho) = (1-D) CZ rho CZ
//                              + (D/2) SaSb+ (Za rho Za + Zb rho Zb) Sa+Sb.
inline Eigen::Matrix4cd distinguishability_target_mask(double d) {
  const Eigen::Vector4cd s = diag_s_a_s_b_dag();
  const Eigen::Vector4cd sza = s.cwiseProduct(diag_za());
  const Eigen::Vector4cd szb = s.cwiseProduct(diag_zb());
  return (1.0 - d) * unitary_mask(diag_cz()) + 0.5 * d * unitary_mask(sza) +
         0.5 * d * unitary_mask(szb);
}

struct DistinguishabilityReport {
  double distinguishability;
  // Corrected success-pattern channel masks, keyed by pattern.
  std::map<DetectionPattern, Eigen::Matrix4cd> corrected_masks;
  double max_deviation_from_target = 0.0;  // pattern (0,2) against C_D
};

// Success-pattern conditional channels for partially distinguishable
// photons; photon b carries sqrt(1-D)|ref> + sqrt(D)|orth>.
inline DistinguishabilityReport distinguishability_distribution(double d) {
  if (!(d >= 0.0 && d <= 1.0))
    throw std::domain_error("distinguishability_distribution: D outside [0, 1]");
  const auto result = detection_distribution(1.0, 1.0, d);

  DistinguishabilityReport report;
  report.distinguishability = d;
  const Eigen::Matrix4cd target = distinguishability_target_mask(d);
  for (auto [k, l] : {std::pair{0, 2}, {1, 3}, {0, 3}, {1, 2}}) {
    const auto pattern = DetectionPattern::pair(k, l);
    const auto& channel = result.patterns.at(pattern);
    const Eigen::Vector4cd correction =
        (l - k == 2) ? diag_s_a_s_b_dag() : diag_s_a_dag_s_b();
    report.corrected_masks[pattern] =
        corrected_mask(channel.normalized_mask(), correction);
  }
  report.max_deviation_from_target =
      (report.corrected_masks.at(DetectionPattern::pair(0, 2)) - target)
          .cwiseAbs()
          .maxCoeff();
  return report;
}

// --- Stabilizer tableau checks ------------------------------------------

struct TableauReport {
  double max_deviation = 0.0;
  std::vector<std::string> checks;

  void record(const std::string& name, double deviation) {
    checks.push_back(name);
    max_deviation = std::max(max_deviation, deviation);
  }
};

namespace detail {

inline Eigen::Matrix4cd pauli2(Pauli a, Pauli b) {
  const Complex i(0, 1);
  Eigen::Matrix2cd ops[4];
  ops[0] = Eigen::Matrix2cd::Identity();
  ops[1] << 0, 1, 1, 0;
  ops[2] << 0, -i, i, 0;
  ops[3] << 1, 0, 0, -1;
  Eigen::Matrix4cd out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c)
      out.block<2, 2>(2 * r, 2 * c) =
          ops[static_cast<int>(a)](r, c) * ops[static_cast<int>(b)];
  return out;
}

// Extracts the diagonal unitary from a rank-one Gram matrix (lossless
// patterns have pure conditional maps), up to global phase.
inline Eigen::Vector4cd rank1_diagonal(const Eigen::Matrix4cd& normalized_gram) {
  Eigen::Vector4cd v;
  for (int u = 0; u < 4; ++u) v(u) = normalized_gram(u, 0);
  const double scale = std::sqrt(std::abs(normalized_gram(0, 0)));
  v /= scale;
  return v;
}

// Deviation of V P V^dag from sign * Q for diagonal V.
inline double conjugation_deviation(const Eigen::Vector4cd& v,
                                    const Eigen::Matrix4cd& p, double sign,
                                    const Eigen::Matrix4cd& q) {
  const Eigen::Matrix4cd vm = v.asDiagonal();
  return (vm * p * vm.adjoint() - sign * q).cwiseAbs().maxCoeff();
}

}  // namespace detail

// Verifies the stabilizer-level behavior of emission, repeat outcomes and
// success outcomes, including the measurement-conditioned corrections.
inline TableauReport tableau_check() {
  TableauReport report;
  const Complex i(0, 1);

  // Emission isometry on (spin ⊗ photon-qubit): |s> -> |s, s>.
  Eigen::Matrix<Complex, 4, 2> e = Eigen::Matrix<Complex, 4, 2>::Zero();
  e(0, 0) = 1.0;  // |00><0|
  e(3, 1) = 1.0;  // |11><1|
  Eigen::Matrix2cd x2, z2;
  x2 << 0, 1, 1, 0;
  z2 << 1, 0, 0, -1;
  const Eigen::Matrix4cd zi = detail::pauli2(Pauli::Z, Pauli::I);
  const Eigen::Matrix4cd xx = detail::pauli2(Pauli::X, Pauli::X);
  const Eigen::Matrix4cd zz = detail::pauli2(Pauli::Z, Pauli::Z);
  report.record("emission preserves Z_qe",
                (zi * e - e * z2).cwiseAbs().maxCoeff());
  report.record("emission maps X_qe to X_qe X_ph",
                (xx * e - e * x2).cwiseAbs().maxCoeff());
  report.record("emission stabilizer Z_qe Z_ph",
                (zz * e - e).cwiseAbs().maxCoeff());

  const auto result = detection_distribution(1.0, 1.0, 0.0);
  const Eigen::Matrix4cd xi = detail::pauli2(Pauli::X, Pauli::I);
  const Eigen::Matrix4cd ix = detail::pauli2(Pauli::I, Pauli::X);
  const Eigen::Matrix4cd iz = detail::pauli2(Pauli::I, Pauli::Z);
  const Eigen::Matrix4cd yz = detail::pauli2(Pauli::Y, Pauli::Z);
  const Eigen::Matrix4cd zy = detail::pauli2(Pauli::Z, Pauli::Y);
  const Eigen::Matrix4cd xz = detail::pauli2(Pauli::X, Pauli::Z);
  const Eigen::Matrix4cd zx = detail::pauli2(Pauli::Z, Pauli::X);

  // Repeat outcomes: modes {0,1} herald m1 = 0, modes {2,3} herald m1 = 1.
  for (auto [k, l, m1] : {std::tuple{0, 0, 0}, {1, 1, 0}, {2, 2, 1}, {3, 3, 1}}) {
    const auto& channel = result.patterns.at(DetectionPattern::pair(k, l));
    const auto v = detail::rank1_diagonal(channel.normalized_mask());
    const double sign = (m1 == 0) ? 1.0 : -1.0;
    const std::string name = DetectionPattern::pair(k, l).str();
    report.record("repeat " + name + ": X_a sign (-1)^m1",
                  detail::conjugation_deviation(v, xi, sign, xi));
    report.record("repeat " + name + ": X_b sign (-1)^m1",
                  detail::conjugation_deviation(v, ix, sign, ix));
    report.record("repeat " + name + ": Z_a preserved",
                  detail::conjugation_deviation(v, zi, 1.0, zi));
    report.record("repeat " + name + ": Z_b preserved",
                  detail::conjugation_deviation(v, iz, 1.0, iz));

    // Conditioned correction Za Zb for m1 = 1 restores the identity gate.
    const Eigen::Vector4cd corrected =
        (m1 == 1) ? diag_za().cwiseProduct(diag_zb()).cwiseProduct(v) : v;
    for (const auto& [label, p] :
         {std::pair<std::string, Eigen::Matrix4cd>{"X_a", xi},
          {"X_b", ix},
          {"Z_a", zi},
          {"Z_b", iz}}) {
      report.record("repeat " + name + " corrected: " + label + " preserved",
                    detail::conjugation_deviation(corrected, p, 1.0, p));
    }
  }

  // Success outcomes: (0,2), (1,3) herald m2 = 0; (0,3), (1,2) herald m2 = 1.
  for (auto [k, l, m2] : {std::tuple{0, 2, 0}, {1, 3, 0}, {0, 3, 1}, {1, 2, 1}}) {
    const auto& channel = result.patterns.at(DetectionPattern::pair(k, l));
    const auto v = detail::rank1_diagonal(channel.normalized_mask());
    const std::string name = DetectionPattern::pair(k, l).str();
    const double sign = (m2 == 0) ? -1.0 : 1.0;  // (-1)^(1+m2)
    report.record("success " + name + ": X_a -> (-1)^(1+m2) Y_a Z_b",
                  detail::conjugation_deviation(v, xi, sign, yz));
    report.record("success " + name + ": X_b -> (-1)^(m2) Z_a Y_b",
                  detail::conjugation_deviation(v, ix, -sign, zy));
    report.record("success " + name + ": Z_a preserved",
                  detail::conjugation_deviation(v, zi, 1.0, zi));
    report.record("success " + name + ": Z_b preserved",
                  detail::conjugation_deviation(v, iz, 1.0, iz));

    const Eigen::Vector4cd correction =
        (m2 == 0) ? diag_s_a_s_b_dag() : diag_s_a_dag_s_b();
    const Eigen::Vector4cd corrected = correction.cwiseProduct(v);
    report.record("success " + name + " corrected: X_a -> X_a Z_b",
                  detail::conjugation_deviation(corrected, xi, 1.0, xz));
    report.record("success " + name + " corrected: X_b -> Z_a X_b",
                  detail::conjugation_deviation(corrected, ix, 1.0, zx));
    report.record("success " + name + " corrected: Z_a preserved",
                  detail::conjugation_deviation(corrected, zi, 1.0, zi));
    report.record("success " + name + " corrected: Z_b preserved",
                  detail::conjugation_deviation(corrected, iz, 1.0, iz));
  }
  return report;
}

// Probability of each pattern for a specific joint state (rather than the
// channel view): loss and interferometer are applied here.
inline std::map<DetectionPattern, double> detection_probabilities(
    JointState state, double eta_a, double eta_b) {
  const auto& basis = ConfigBasis::instance();
  apply_loss(state, eta_a, eta_b);
  apply_interferometer(state);
  std::map<DetectionPattern, double> out;
  for (int c = 0; c < basis.size(); ++c) {
    const PhotonConfig& cfg = basis.config(c);
    if (cfg.photon_count() != 2) continue;
    std::array<std::int8_t, 4> counts{};
    int detected = 0;
    for (int path = 0; path < kPathCount; ++path) {
      int n = 0;
      for (int label = 0; label < 2; ++label)
        n += cfg.occupation(detected_mode(path, label));
      counts[static_cast<std::size_t>(path)] = static_cast<std::int8_t>(n);
      detected += n;
    }
    DetectionPattern pattern;
    if (detected < 2)
      pattern = DetectionPattern::loss_class();
    else
      pattern.counts = counts;
    double p = 0.0;
    for (int u = 0; u < 4; ++u) p += std::norm(state.amp(u, c));
    out[pattern] += p;
  }
  return out;
}

}  // namespace spoqc::optics
